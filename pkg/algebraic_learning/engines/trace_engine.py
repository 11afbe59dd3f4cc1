from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from algebraic_learning.algebra.algebra_state import BOTTOM_BIT, AlgebraState
from algebraic_learning.algebra.atom_set import AtomSet, iter_bits
from algebraic_learning.algebra.elements import ElementKind, ElementRef, Relation
from algebraic_learning.config import Config, EnvironmentVariables
from algebraic_learning.exceptions.algebra_exceptions import (
    DualElementGivenException,
)
from algebraic_learning.exceptions.learning_exceptions import (
    InconsistentInputException,
    IterationLimitException,
    NoDiscriminantPossibleException,
)
from algebraic_learning.logger import get_logger

logger = get_logger(__name__)


class Trace(BaseModel):
    """Dual atoms shared by the duals of every atom below a master element."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    atoms: AtomSet


class ConsistencyReport(BaseModel):
    consistent: bool
    failed_relations: List[Relation]


def split_relations(
    relations: Sequence[Relation],
) -> Tuple[List[Relation], List[Relation]]:
    """Split relations into (positives, negatives) keeping their order."""
    positives = [r for r in relations if r.is_positive]
    negatives = [r for r in relations if not r.is_positive]
    return positives, negatives


class TraceEngine:
    """Computes traces and enforces the trace constraints of a relation set."""

    def __init__(self, max_iterations: Optional[int] = None) -> None:
        if max_iterations is None:
            max_iterations = Config.get_int(
                EnvironmentVariables.ALGEBRA_MAX_TRACE_ITERATIONS, 100000
            )
        self._max_iterations = max_iterations

    @property
    def max_iterations(self) -> int:
        return self._max_iterations

    def trace(self, state: AlgebraState, x: ElementRef) -> Trace:
        return Trace(atoms=AtomSet.from_bits(self.trace_bits(state, x)))

    def trace_bits(self, state: AlgebraState, x: ElementRef) -> int:
        if not x.is_master:
            raise DualElementGivenException(details=str(x))
        if x.kind is ElementKind.ATOM:
            return state.dual_bits(x)
        return self.trace_of_atoms(state, state.atom_bits(x))

    @staticmethod
    def trace_of_atoms(state: AlgebraState, atoms: int) -> int:
        """Intersection of GL^a([phi]) over the atoms of mask `atoms`."""
        if atoms & BOTTOM_BIT:
            trace = state.dual_universe_bits()
            atoms &= ~BOTTOM_BIT
        else:
            trace = -1
        for atom in iter_bits(atoms):
            trace &= state.atom_dual_bits(atom)
            if trace == BOTTOM_BIT:
                break
        return trace

    def preprocess_duals(
        self, state: AlgebraState, relations: Sequence[Relation]
    ) -> ConsistencyReport:
        """Load the reverted relations into the dual and report failing negatives.

        Every positive relation becomes an edge [rhs] -> [lhs] and every
        negative relation gets a fresh dual atom under [rhs].
        """
        positives, negatives = split_relations(relations)
        for relation in positives:
            state.add_dual_positive_edge(relation)
        for relation in negatives:
            state.add_dual_atom([state.dual(relation.rhs)], close=False)
        state.close_dual()

        failed = [r for r in negatives if not self.reverted_holds(state, r)]
        if failed:
            logger.debug(f"{len(failed)} of {len(negatives)} negatives fail in the dual")
        return ConsistencyReport(consistent=not failed, failed_relations=failed)

    @staticmethod
    def reverted_holds(state: AlgebraState, relation: Relation) -> bool:
        """Whether not([rhs] < [lhs]) holds in the dual."""
        return bool(state.dual_bits(relation.rhs) & ~state.dual_bits(relation.lhs))

    def constraint_holds(self, state: AlgebraState, relation: Relation) -> bool:
        trace_lhs = self.trace_bits(state, relation.lhs)
        trace_rhs = self.trace_bits(state, relation.rhs)
        contained = trace_rhs & ~trace_lhs == 0
        return contained if relation.is_positive else not contained

    def violated_constraints(
        self, state: AlgebraState, relations: Sequence[Relation]
    ) -> List[Relation]:
        return [r for r in relations if not self.constraint_holds(state, r)]

    def enforce_negative_constraints(
        self, state: AlgebraState, negatives: Sequence[Relation]
    ) -> int:
        """Make Tr(b) not a subset of Tr(a) for every not(a < b). Returns the mutation count."""
        mutations = 0
        for relation in negatives:
            a, b = relation.lhs, relation.rhs
            trace_b = self.trace_bits(state, b)
            if trace_b & ~self.trace_bits(state, a):
                continue
            candidates = state.component_bits(a) & ~state.component_bits(b)
            if not candidates:
                raise NoDiscriminantPossibleException(details=str(relation))

            tried: set = set()
            constant = self._find_strongly_discriminant_constant(
                state, candidates, trace_b
            )
            while constant is None:
                target = self._fallback_target(state, relation, candidates, tried)
                if target is None:
                    raise NoDiscriminantPossibleException(details=str(relation))
                tried.add(target)
                state.add_dual_atom([target])
                mutations += 1
                trace_b = self.trace_bits(state, b)
                constant = self._find_strongly_discriminant_constant(
                    state, candidates, trace_b
                )

            state.add_atom([ElementRef(ElementKind.CONSTANT, constant)])
            mutations += 1
        return mutations

    @staticmethod
    def _find_strongly_discriminant_constant(
        state: AlgebraState, candidates: int, trace_b: int
    ) -> Optional[int]:
        """A constant of `candidates` whose dual misses some dual atom of Tr(b)."""
        constants = list(iter_bits(candidates))
        for dual_atom in state.shuffled(list(iter_bits(trace_b & ~BOTTOM_BIT))):
            free = [
                c
                for c in constants
                if not state.constant_dual_bits(c) >> dual_atom & 1
            ]
            if free:
                return state.choose(free)
        return None

    @staticmethod
    def _fallback_target(
        state: AlgebraState, relation: Relation, candidates: int, tried: set
    ) -> Optional[ElementRef]:
        """A dual constant below [b], not below [a], and not below every candidate."""
        dual_a = state.dual(relation.lhs)
        candidate_duals = {
            state.dual(ElementRef(ElementKind.CONSTANT, c)) for c in iter_bits(candidates)
        }
        options = []
        for target in state.dual_constants_below(relation.rhs):
            if target in tried:
                continue
            above = set(state.dual_constants_above(target))
            if dual_a in above or candidate_duals <= above:
                continue
            options.append(target)
        if not options:
            return None
        return state.choose(options)

    def enforce_positive_constraints(
        self, state: AlgebraState, positives: Sequence[Relation]
    ) -> int:
        """Make Tr(e) a subset of Tr(d) for every d < e. Returns the mutation count."""
        mutations = 0
        for relation in positives:
            d, e = relation.lhs, relation.rhs
            components = list(iter_bits(state.component_bits(e)))
            iterations = 0
            while True:
                extra = self.trace_bits(state, e) & ~self.trace_bits(state, d)
                if not extra:
                    break
                iterations += 1
                if iterations > self._max_iterations:
                    raise IterationLimitException(details=str(relation))
                dual_atom = state.choose_bit(extra)
                gamma = [
                    c
                    for c in components
                    if not state.constant_dual_bits(c) >> dual_atom & 1
                ]
                if gamma:
                    constant = state.choose(gamma)
                    state.add_atom([ElementRef(ElementKind.CONSTANT, constant)])
                else:
                    state.add_dual_atom_target(
                        ElementRef(ElementKind.DUAL_ATOM, dual_atom), state.dual(d)
                    )
                mutations += 1
        return mutations

    def enforce_all(
        self,
        state: AlgebraState,
        relations: Sequence[Relation],
        preprocess: bool = True,
    ) -> int:
        """Alternate negative and positive enforcement until a pass changes nothing.

        Returns the number of passes that mutated the state.
        """
        if not relations:
            return 0
        if preprocess:
            report = self.preprocess_duals(state, relations)
            if not report.consistent:
                raise InconsistentInputException(
                    details=f"{len(report.failed_relations)} failed relations: "
                    f"{report.failed_relations[:5]}"
                )
        positives, negatives = split_relations(relations)
        passes = 0
        while True:
            mutations = self.enforce_negative_constraints(state, negatives)
            mutations += self.enforce_positive_constraints(state, positives)
            if not mutations:
                break
            passes += 1
            if passes > self._max_iterations:
                raise IterationLimitException(details=f"{passes} passes")
        logger.debug(
            f"Trace constraints of {len(relations)} relations hold after {passes} passes, "
            f"{state.atom_count} atoms"
        )
        return passes
