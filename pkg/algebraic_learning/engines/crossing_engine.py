from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from algebraic_learning.algebra.algebra_state import BOTTOM_BIT, AlgebraState
from algebraic_learning.algebra.atom_set import AtomSet, iter_bits
from algebraic_learning.algebra.elements import ElementRef, Relation
from algebraic_learning.engines.trace_engine import TraceEngine
from algebraic_learning.exceptions.learning_exceptions import (
    SizeLimitExceededException,
    TraceConstraintMissingException,
)
from algebraic_learning.logger import get_logger

logger = get_logger(__name__)


class CrossingPlan(BaseModel):
    """What a crossing of `source` into `target` did to the atomization.

    `created` pairs every crossed atom with its (phi, epsilon) parents and
    `protective` pairs every epsilon' with the epsilon it replaces.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    source: ElementRef
    target: ElementRef
    discriminant: AtomSet
    created: List[Tuple[int, Tuple[int, int]]]
    protective: List[Tuple[int, int]]
    marked_for_deletion: AtomSet

    @property
    def is_noop(self) -> bool:
        return not self.discriminant


class CrossingEngine:
    """Full and sparse crossing of one element into another."""

    def __init__(self, trace_engine: Optional[TraceEngine] = None) -> None:
        self._trace_engine = trace_engine or TraceEngine()

    def sparse_crossing(
        self, state: AlgebraState, a: ElementRef, b: ElementRef
    ) -> CrossingPlan:
        """Enforce a < b replacing each atom of dis(a, b) by few crossed atoms.

        Each phi of the discriminant is crossed with atoms of b, taken in random
        order, only while that narrows the dual atoms still missing from the
        crossed atoms' traces. Traces of constants and terms are preserved when
        the trace constraint of a < b holds.
        """
        discriminant = self.discriminant_bits(state, a, b)
        if not discriminant:
            return self._noop(a, b)

        universe = state.dual_universe_bits()
        targets = list(iter_bits(state.atom_bits(b) & ~BOTTOM_BIT))
        used = 0
        created: List[Tuple[int, Tuple[int, int]]] = []

        for phi in iter_bits(discriminant):
            delta = universe & ~state.atom_dual_bits(phi)
            if not targets:
                if delta:
                    raise TraceConstraintMissingException(details=f"{a} into {b}")
                continue
            pool = state.shuffled(targets)
            fingerprint = state.fingerprint_bits(phi)
            while True:
                if not pool:
                    raise TraceConstraintMissingException(details=f"{a} into {b}")
                epsilon = pool.pop()
                narrowed = delta & state.atom_dual_bits(epsilon)
                if narrowed != delta or not delta:
                    crossed = state.add_atom_with_fingerprint(
                        fingerprint | state.fingerprint_bits(epsilon)
                    )
                    created.append((crossed.index, (phi, epsilon)))
                    delta = narrowed
                    used |= 1 << epsilon
                if not delta:
                    break

        protective = self._protect(state, used)
        marked = AtomSet.from_bits(used | discriminant)
        state.delete_atoms(marked)
        logger.debug(
            f"Sparse crossing {a} into {b}: {len(created)} crossed atoms, "
            f"{len(protective)} protective atoms"
        )
        return CrossingPlan(
            source=a,
            target=b,
            discriminant=AtomSet.from_bits(discriminant),
            created=created,
            protective=protective,
            marked_for_deletion=marked,
        )

    def full_crossing(
        self,
        state: AlgebraState,
        a: ElementRef,
        b: ElementRef,
        check_trace: bool = True,
        max_atoms: Optional[int] = None,
    ) -> CrossingPlan:
        """Enforce a < b crossing every atom of dis(a, b) with every atom of b."""
        if check_trace:
            trace_a = self._trace_engine.trace_bits(state, a)
            trace_b = self._trace_engine.trace_bits(state, b)
            if trace_b & ~trace_a:
                raise TraceConstraintMissingException(details=f"{a} into {b}")

        discriminant = self.discriminant_bits(state, a, b)
        if not discriminant:
            return self._noop(a, b)
        targets = state.atom_bits(b) & ~BOTTOM_BIT
        size_a, size_b = discriminant.bit_count(), targets.bit_count()
        projected = state.atom_count + size_a * size_b - size_a
        if max_atoms is not None and projected > max_atoms:
            raise SizeLimitExceededException(
                details=f"{projected} atoms projected, cap {max_atoms}"
            )

        created: List[Tuple[int, Tuple[int, int]]] = []
        for phi in iter_bits(discriminant):
            fingerprint = state.fingerprint_bits(phi)
            for epsilon in iter_bits(targets):
                crossed = state.add_atom_with_fingerprint(
                    fingerprint | state.fingerprint_bits(epsilon)
                )
                created.append((crossed.index, (phi, epsilon)))
        protective = self._protect(state, targets)
        marked = AtomSet.from_bits(targets | discriminant)
        state.delete_atoms(marked)
        return CrossingPlan(
            source=a,
            target=b,
            discriminant=AtomSet.from_bits(discriminant),
            created=created,
            protective=protective,
            marked_for_deletion=marked,
        )

    def enforce_positive_relations(
        self, state: AlgebraState, positives: Sequence[Relation]
    ) -> List[CrossingPlan]:
        """Sparse-cross every positive relation, in seeded random order."""
        return [
            self.sparse_crossing(state, relation.lhs, relation.rhs)
            for relation in state.shuffled(list(positives))
        ]

    @staticmethod
    def discriminant_bits(state: AlgebraState, a: ElementRef, b: ElementRef) -> int:
        """dis(a, b): atoms of a that are not atoms of b."""
        return state.atom_bits(a) & ~state.atom_bits(b)

    @staticmethod
    def _protect(state: AlgebraState, used: int) -> List[Tuple[int, int]]:
        protective = []
        for epsilon in iter_bits(used):
            copy = state.add_atom_with_fingerprint(state.fingerprint_bits(epsilon))
            protective.append((copy.index, epsilon))
        return protective

    @staticmethod
    def _noop(a: ElementRef, b: ElementRef) -> CrossingPlan:
        empty = AtomSet()
        return CrossingPlan(
            source=a,
            target=b,
            discriminant=empty,
            created=[],
            protective=[],
            marked_for_deletion=empty,
        )
