from collections import Counter
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.exceptions.algebra_exceptions import (
    MixedAlgebrasException,
    UnknownConstantException,
)
from algebraic_learning.training.models import ModelSnapshot


class QueryTerm(BaseModel):
    """The constants of a test observation, as indices of a snapshot's table."""

    model_config = ConfigDict(frozen=True)

    constants: FrozenSet[int]

    @classmethod
    def from_names(cls, snapshot: ModelSnapshot, names: Iterable[str]) -> "QueryTerm":
        return cls(constants=frozenset(snapshot.constant_index(n) for n in names))

    @property
    def mask(self) -> int:
        bits = 0
        for index in self.constants:
            bits |= 1 << index
        return bits


class VoteResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    agreements: int = Field(ge=0)
    voters: int = Field(ge=1)
    threshold: int
    decision: bool

    @model_validator(mode="after")
    def check_decision(self) -> "VoteResult":
        if self.agreements > self.voters:
            raise ValueError("more agreements than voters")
        if self.decision != (self.agreements >= self.threshold):
            raise ValueError("decision must be agreements >= threshold")
        return self


class ClassificationReport(BaseModel):
    """Error rates of binary predictions against labels."""

    count: int
    positives: int
    negatives: int
    false_positives: int
    false_negatives: int
    agreement_histogram: Optional[Dict[int, int]] = None

    @property
    def error(self) -> float:
        return (self.false_positives + self.false_negatives) / self.count if self.count else 0.0

    @property
    def false_positive_rate(self) -> float:
        return self.false_positives / self.negatives if self.negatives else 0.0

    @property
    def false_negative_rate(self) -> float:
        return self.false_negatives / self.positives if self.positives else 0.0

    def summary(self) -> dict:
        data = {
            "count": self.count,
            "error": self.error,
            "fpr": self.false_positive_rate,
            "fnr": self.false_negative_rate,
        }
        if self.agreement_histogram is not None:
            data["agreements"] = {str(k): v for k, v in sorted(self.agreement_histogram.items())}
        return data


def contains(snapshot: ModelSnapshot, class_constant: str, query: QueryTerm) -> bool:
    """Every atom below the class constant is below some constant of the query."""
    return snapshot.holds(snapshot.mask_of([class_constant]), query.mask)


def vote(
    snapshots: Sequence[ModelSnapshot],
    class_constant: str,
    query: QueryTerm,
    threshold: int,
) -> VoteResult:
    """Count the snapshots whose class contains the query.

    All snapshots must share one constant table, as replicas of a run do.
    """
    if not snapshots:
        raise ValueError("vote needs at least one snapshot")
    table = snapshots[0].constants
    for snapshot in snapshots[1:]:
        if snapshot.constants != table:
            raise MixedAlgebrasException(details="snapshots with different constant tables")
    agreements = sum(contains(s, class_constant, query) for s in snapshots)
    return VoteResult(
        agreements=agreements,
        voters=len(snapshots),
        threshold=threshold,
        decision=agreements >= threshold,
    )


def agreement_histogram(votes: Iterable[VoteResult]) -> Dict[int, int]:
    return dict(sorted(Counter(v.agreements for v in votes).items()))


def class_pinning_masks(snapshot: ModelSnapshot, class_constant: str) -> List[int]:
    """Distinct pinning fingerprints below the class constant, as masks."""
    class_bit = snapshot.mask_of([class_constant])
    masks = set()
    for fingerprint in snapshot.pinning:
        mask = 0
        for index in fingerprint:
            mask |= 1 << index
        if mask & class_bit:
            masks.add(mask)
    return sorted(masks)


def misses(snapshot: ModelSnapshot, class_constant: str, query: QueryTerm) -> int:
    """Pinning atoms of the class that the query does not contain."""
    q = query.mask
    return sum(1 for mask in class_pinning_masks(snapshot, class_constant) if not mask & q)


def misses_classify(
    snapshot: ModelSnapshot, class_constant: str, query: QueryTerm, cutoff: int
) -> bool:
    return misses(snapshot, class_constant, query) <= cutoff


def best_misses_cutoff(
    snapshot: ModelSnapshot,
    class_constant: str,
    examples: Sequence[Tuple[QueryTerm, bool]],
    max_cutoff: int,
) -> Tuple[int, float]:
    """The cutoff in [0, max_cutoff] with the lowest error; ties keep the smaller one."""
    if not examples:
        return 0, 0.0
    masks = class_pinning_masks(snapshot, class_constant)
    counted = [
        (sum(1 for mask in masks if not mask & query.mask), label)
        for query, label in examples
    ]
    best_cutoff, best_error = 0, float("inf")
    for cutoff in range(max_cutoff + 1):
        wrong = sum((count <= cutoff) != label for count, label in counted)
        error = wrong / len(counted)
        if error < best_error:
            best_cutoff, best_error = cutoff, error
    return best_cutoff, best_error


def classification_report(
    predictions: Sequence[bool],
    labels: Sequence[bool],
    votes: Optional[Sequence[VoteResult]] = None,
) -> ClassificationReport:
    if len(predictions) != len(labels):
        raise ValueError(f"{len(predictions)} predictions for {len(labels)} labels")
    positives = sum(1 for label in labels if label)
    return ClassificationReport(
        count=len(labels),
        positives=positives,
        negatives=len(labels) - positives,
        false_positives=sum(1 for p, l in zip(predictions, labels) if p and not l),
        false_negatives=sum(1 for p, l in zip(predictions, labels) if l and not p),
        agreement_histogram=agreement_histogram(votes) if votes is not None else None,
    )


def relation_error(snapshot: ModelSnapshot, specs: Sequence[RelationSpec]) -> float:
    """Fraction of relations that do not hold. Unknown constants count as failures."""
    if not specs:
        return 0.0
    failures = 0
    for spec in specs:
        try:
            holds = snapshot.holds_spec(spec)
        except UnknownConstantException:
            holds = False
        failures += not holds
    return failures / len(specs)


def retained_relations(snapshot: ModelSnapshot, specs: Iterable[RelationSpec]) -> int:
    """Distinct relations that hold in the snapshot."""
    retained = 0
    for spec in set(specs):
        try:
            retained += snapshot.holds_spec(spec)
        except UnknownConstantException:
            pass
    return retained
