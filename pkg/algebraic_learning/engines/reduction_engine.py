from typing import Optional, Sequence

from pydantic import BaseModel, ConfigDict

from algebraic_learning.algebra.algebra_state import BOTTOM_BIT, AlgebraState
from algebraic_learning.algebra.atom_set import AtomSet, iter_bits
from algebraic_learning.algebra.elements import ElementKind, ElementRef, Relation
from algebraic_learning.engines.trace_engine import TraceEngine
from algebraic_learning.logger import get_logger

logger = get_logger(__name__)


class ReductionStats(BaseModel):
    """Atom counts around a reduction. Bottom atoms are not counted."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    atoms_before: int
    atoms_after: int
    kept: AtomSet

    @property
    def removed(self) -> int:
        return self.atoms_before - self.atoms_after


class ReductionEngine:
    """Shrinks the master and dual atomizations without changing what they hold."""

    def __init__(self, trace_engine: Optional[TraceEngine] = None) -> None:
        self._trace_engine = trace_engine or TraceEngine()

    def reduce_master(self, state: AlgebraState) -> ReductionStats:
        """Keep a set of atoms that reproduces the trace of every constant.

        Constants are visited in random order; for each one atoms are added to
        the kept set until their dual sets intersect exactly to Tr(c). Every
        atom outside the kept set is deleted.
        """
        before = state.atom_count
        kept = BOTTOM_BIT
        universe = state.dual_universe_bits()
        for constant in state.shuffled(list(range(state.constant_count))):
            ref = ElementRef(ElementKind.CONSTANT, constant)
            atoms = state.atom_bits(ref) & ~BOTTOM_BIT
            trace = self._trace_engine.trace_bits(state, ref)
            window = universe
            for atom in iter_bits(kept & atoms):
                window &= state.atom_dual_bits(atom)
            while window != trace:
                dual_atom = state.choose_bit(window & ~trace)
                options = [
                    atom
                    for atom in iter_bits(atoms)
                    if not state.atom_dual_bits(atom) >> dual_atom & 1
                ]
                atom = state.choose(options)
                kept |= 1 << atom
                window &= state.atom_dual_bits(atom)

        state.delete_atoms(AtomSet.from_bits(state.live_atoms().bits & ~kept))
        stats = ReductionStats(
            atoms_before=before,
            atoms_after=state.atom_count,
            kept=AtomSet.from_bits(kept & ~BOTTOM_BIT),
        )
        logger.debug(f"Master reduction: {stats.atoms_before} -> {stats.atoms_after}")
        return stats

    def reduce_dual(
        self, state: AlgebraState, negatives: Sequence[Relation]
    ) -> ReductionStats:
        """Keep one discriminating dual atom per negative relation, delete the rest."""
        before = state.dual_atom_count
        kept = BOTTOM_BIT
        uncovered = 0
        for relation in state.shuffled(list(negatives)):
            discriminant = state.dual_bits(relation.rhs) & ~state.dual_bits(
                relation.lhs
            )
            if not discriminant:
                uncovered += 1
                continue
            if not discriminant & kept:
                kept |= 1 << state.choose_bit(discriminant)
        if uncovered:
            logger.warning(
                f"{uncovered} negative relations have no discriminating dual atom"
            )

        state.delete_dual_atoms(AtomSet.from_bits(state.dual_atoms().bits & ~kept))
        return ReductionStats(
            atoms_before=before,
            atoms_after=state.dual_atom_count,
            kept=AtomSet.from_bits(kept & ~BOTTOM_BIT),
        )

    def eliminate_redundant_atoms(self, state: AlgebraState) -> ReductionStats:
        """Remove atoms whose every constant holds a smaller or equal witness atom.

        Larger fingerprints go first; equal fingerprints drop the higher index.
        """
        before = state.atom_count
        order = sorted(
            state.learned_atoms(),
            key=lambda atom: (-state.fingerprint_bits(atom).bit_count(), -atom),
        )
        for atom in order:
            fingerprint = state.fingerprint_bits(atom)
            if self._is_redundant(state, atom, fingerprint):
                state.delete_atoms(AtomSet([atom]))
        return ReductionStats(
            atoms_before=before,
            atoms_after=state.atom_count,
            kept=state.learned_atoms(),
        )

    @staticmethod
    def _is_redundant(state: AlgebraState, atom: int, fingerprint: int) -> bool:
        for constant in iter_bits(fingerprint):
            others = state.atom_bits(ElementRef(ElementKind.CONSTANT, constant))
            others &= ~(1 << atom)
            if not any(
                state.fingerprint_bits(other) & ~fingerprint == 0
                for other in iter_bits(others)
            ):
                return False
        return True
