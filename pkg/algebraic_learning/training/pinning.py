from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.algebra.atom_set import iter_bits
from algebraic_learning.algebra.elements import (
    ElementKind,
    ElementRef,
    Relation,
    RelationSpec,
)
from algebraic_learning.config import Config, EnvironmentVariables
from algebraic_learning.engines.trace_engine import TraceEngine
from algebraic_learning.exceptions.learning_exceptions import (
    InconsistentTrainingSetException,
)
from algebraic_learning.logger import get_logger
from algebraic_learning.training.models import PinningEntry

logger = get_logger(__name__)

Fingerprint = Tuple[int, ...]


class PinningStructure:
    """Accumulated pinning entries of a run, deduplicated by fingerprint.

    A discarded fingerprint is remembered and never accepted again.
    """

    def __init__(self, entries: Iterable[PinningEntry] = ()) -> None:
        self._entries: Dict[Fingerprint, PinningEntry] = {}
        self._discarded: Set[Fingerprint] = set()
        for entry in entries:
            self.add(entry)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[PinningEntry]:
        return iter(list(self._entries.values()))

    def __contains__(self, fingerprint: object) -> bool:
        return fingerprint in self._entries

    @property
    def entries(self) -> List[PinningEntry]:
        return list(self._entries.values())

    @property
    def discarded(self) -> Set[Fingerprint]:
        return set(self._discarded)

    def add(self, entry: PinningEntry) -> bool:
        """Store `entry` unless its fingerprint is known or was discarded."""
        if entry.fingerprint in self._entries or entry.fingerprint in self._discarded:
            return False
        self._entries[entry.fingerprint] = entry
        return True

    def discard(self, fingerprint: Fingerprint) -> None:
        self._entries.pop(fingerprint, None)
        self._discarded.add(fingerprint)

    @staticmethod
    def term_mask(entry: PinningEntry, constant_count: int) -> int:
        """Components of the pinning term: every constant not in the fingerprint."""
        return ((1 << constant_count) - 1) & ~entry.mask

    def relation_specs(
        self, entry: PinningEntry, constants: Sequence[str]
    ) -> List[RelationSpec]:
        """The named pinning relations `not(c < T)` for c in the fingerprint."""
        term = [constants[i] for i in iter_bits(self.term_mask(entry, len(constants)))]
        if not term:
            return []
        return [RelationSpec.negative(constants[c], term) for c in entry.fingerprint]


class PinningManager:
    """Creates pinning entries from atomizations and filters them against new batches."""

    def __init__(self, max_enforced: Optional[int] = None) -> None:
        if max_enforced is None:
            max_enforced = Config.get_int(
                EnvironmentVariables.ALGEBRA_MAX_PINNING_ENFORCED, 5000
            )
        self._max_enforced = max_enforced

    @property
    def max_enforced(self) -> int:
        return self._max_enforced

    def generate_pinning(
        self, state: AlgebraState, pinning: PinningStructure, epoch: int = 0
    ) -> List[PinningEntry]:
        """Add one entry per learned atom; return the entries that were new.

        Atoms above every constant give an empty pinning term and are skipped.
        """
        full = (1 << state.constant_count) - 1
        added = []
        for atom in state.learned_atoms():
            fingerprint = state.fingerprint_bits(atom)
            if fingerprint == full:
                continue
            entry = PinningEntry(
                fingerprint=tuple(iter_bits(fingerprint)), origin_epoch=epoch
            )
            if pinning.add(entry):
                added.append(entry)
        logger.debug(f"{len(added)} new pinning entries, {len(pinning)} in total")
        return added

    @staticmethod
    def entry_holds(state: AlgebraState, entry: PinningEntry) -> bool:
        """Whether every constant of the fingerprint keeps an atom outside the pinning term."""
        mask = PinningStructure.term_mask(entry, state.constant_count)
        if not mask:
            return False
        outside = ~state.atoms_of_constants(mask)
        return all(
            state.atom_bits(ElementRef(ElementKind.CONSTANT, c)) & outside
            for c in entry.fingerprint
        )

    @staticmethod
    def bind_entry(state: AlgebraState, entry: PinningEntry) -> List[Relation]:
        mask = PinningStructure.term_mask(entry, state.constant_count)
        if not mask:
            return []
        term = state.term_for_components(mask)
        return [
            Relation.negative(ElementRef(ElementKind.CONSTANT, c), term)
            for c in entry.fingerprint
        ]

    def filter_pinning(
        self,
        state: AlgebraState,
        batch: Sequence[Relation],
        pinning: PinningStructure,
        trace_engine: TraceEngine,
        max_enforced: Optional[int] = None,
    ) -> Tuple[List[Relation], List[PinningEntry]]:
        """Load the batch and the holding pinning relations into the dual.

        Returns the pinning relations that stay consistent with the batch and
        the entries discarded because one of their relations failed. Entries
        that do not hold in the current model are neither enforced nor
        discarded.
        """
        if max_enforced is None:
            max_enforced = self._max_enforced
        holding: List[Tuple[PinningEntry, List[Relation]]] = []
        enforced = 0
        for entry in pinning:
            if not self.entry_holds(state, entry):
                continue
            relations = self.bind_entry(state, entry)
            if enforced + len(relations) > max_enforced:
                logger.warning(
                    f"Pinning cap {max_enforced} reached, "
                    f"{len(pinning) - len(holding)} entries left out this epoch"
                )
                break
            holding.append((entry, relations))
            enforced += len(relations)

        pinning_relations = [r for _, relations in holding for r in relations]
        report = trace_engine.preprocess_duals(state, list(batch) + pinning_relations)
        failed = set(report.failed_relations)
        batch_failures = [r for r in batch if r in failed]
        if batch_failures:
            raise InconsistentTrainingSetException(
                details=f"{len(batch_failures)} batch relations fail: {batch_failures[:5]}"
            )

        kept: List[Relation] = []
        discarded: List[PinningEntry] = []
        for entry, relations in holding:
            if failed.intersection(relations):
                pinning.discard(entry.fingerprint)
                discarded.append(entry)
            else:
                kept.extend(relations)
        if discarded:
            logger.warning(
                f"Discarded {len(discarded)} pinning entries inconsistent with the batch"
            )
        return kept, discarded
