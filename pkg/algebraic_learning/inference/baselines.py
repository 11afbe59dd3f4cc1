"""Memorizing models of a relation set, at the two ends of algebraic freedom."""

from typing import Optional, Sequence

from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.config import Config, EnvironmentVariables
from algebraic_learning.engines.crossing_engine import CrossingEngine
from algebraic_learning.engines.trace_engine import TraceEngine, split_relations
from algebraic_learning.exceptions.learning_exceptions import (
    InconsistentInputException,
)
from algebraic_learning.logger import get_logger
from algebraic_learning.training.models import ModelSnapshot

logger = get_logger(__name__)


def _bound_state(relations: Sequence[RelationSpec], seed: Optional[int]) -> AlgebraState:
    state = AlgebraState(seed)
    for spec in relations:
        for name in spec.lhs + spec.rhs:
            state.ensure_constant(name)
    return state


def build_least_free_model(
    relations: Sequence[RelationSpec],
    seed: Optional[int] = 0,
    trace_engine: Optional[TraceEngine] = None,
) -> ModelSnapshot:
    """One master atom per dual atom of the negatives.

    Each dual atom sits under the dual of a negative's right-hand side; its
    master atom lies below exactly the constants whose duals miss it.
    """
    trace_engine = trace_engine or TraceEngine()
    state = _bound_state(relations, seed)
    bound = [state.bind(spec) for spec in relations]
    report = trace_engine.preprocess_duals(state, bound)
    if not report.consistent:
        raise InconsistentInputException(
            details=f"{len(report.failed_relations)} negatives fail in the dual"
        )

    duals = [state.constant_dual_bits(c) for c in range(state.constant_count)]
    fingerprints = set()
    for zeta in state.dual_atoms():
        if zeta == 0:
            continue
        fingerprint = tuple(c for c, bits in enumerate(duals) if not bits >> zeta & 1)
        if fingerprint:
            fingerprints.add(fingerprint)
    logger.info(
        f"Least free model of {len(relations)} relations: {len(fingerprints)} atoms"
    )
    return ModelSnapshot(
        seed=seed, constants=list(state.constant_names), atoms=sorted(fingerprints)
    )


def build_freest_model(
    relations: Sequence[RelationSpec],
    seed: Optional[int] = 0,
    max_atoms: Optional[int] = None,
    crossing_engine: Optional[CrossingEngine] = None,
) -> ModelSnapshot:
    """One atom per constant, then every positive relation by full crossing."""
    if max_atoms is None:
        max_atoms = Config.get_int(EnvironmentVariables.ALGEBRA_FREEST_ATOM_CAP, 20000)
    crossing_engine = crossing_engine or CrossingEngine()
    state = _bound_state(relations, seed)
    for constant in state.constants():
        state.add_atom([constant])
    bound = [state.bind(spec) for spec in relations]
    positives, negatives = split_relations(bound)
    pending = positives
    while pending:
        for relation in pending:
            crossing_engine.full_crossing(
                state, relation.lhs, relation.rhs, check_trace=False, max_atoms=max_atoms
            )
        pending = [r for r in positives if not state.holds(r)]
    failed = [r for r in negatives if not state.holds(r)]
    if failed:
        raise InconsistentInputException(
            details=f"{len(failed)} negatives entailed by the positives"
        )
    snapshot = ModelSnapshot.from_state(state)
    logger.info(
        f"Freest model of {len(relations)} relations: {snapshot.atom_count} atoms"
    )
    return snapshot

