from unittest.mock import patch

import pytest
from hypothesis import given, settings

from algebra_strategies import random_algebras
from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.algebra.elements import Relation
from algebraic_learning.engines.reduction_engine import ReductionEngine
from algebraic_learning.engines.trace_engine import TraceEngine


def toy_with_atoms(toy_state, toy_bound, atoms):
    """Load the toy duals and add atoms given as constant names."""
    TraceEngine().preprocess_duals(toy_state, toy_bound)
    return [
        toy_state.add_atom([toy_state.constant(name) for name in names]).index
        for names in atoms
    ]


PHI_2 = ("p1_0b", "p0_1b", "v")
PHI_3 = ("p1_0b", "p1_1b", "v")
BETA = ("p1_0b",)


class TestMasterReduction:
    """Test suite for the trace-preserving master reduction."""

    @pytest.fixture
    def trace_engine(self):
        return TraceEngine()

    @pytest.fixture
    def engine(self, trace_engine):
        return ReductionEngine(trace_engine)

    @pytest.mark.parametrize("seed", range(10))
    def test_traces_survive_the_reduction(
        self, engine, trace_engine, toy_encoder, toy_relations, seed
    ):
        """Test that Tr(c) of every constant is unchanged for several seeds."""
        state = AlgebraState(seed=seed)
        toy_encoder.register(state)
        bound = [state.bind(spec) for spec in toy_relations]
        phi_2, phi_3, _ = toy_with_atoms(state, bound, [PHI_2, PHI_3, BETA])
        before = [trace_engine.trace_bits(state, c) for c in state.constants()]

        stats = engine.reduce_master(state)

        assert [trace_engine.trace_bits(state, c) for c in state.constants()] == before
        assert {phi_2, phi_3} <= set(stats.kept)
        assert stats.atoms_before == 3

    def test_redundant_atom_is_removed_for_some_seed(
        self, engine, toy_encoder, toy_relations
    ):
        """Test that the atom adding nothing to any trace gets deleted."""
        removed = []
        for seed in range(20):
            state = AlgebraState(seed=seed)
            toy_encoder.register(state)
            bound = [state.bind(spec) for spec in toy_relations]
            toy_with_atoms(state, bound, [PHI_2, PHI_3, BETA])
            removed.append(engine.reduce_master(state).removed)

        assert 1 in removed
        assert set(removed) <= {0, 1}

    def test_minimal_atomization_is_left_alone(self, engine, toy_state, toy_bound):
        """Test that reduction is the identity when every atom is needed."""
        atoms = toy_with_atoms(toy_state, toy_bound, [PHI_2, PHI_3])

        stats = engine.reduce_master(toy_state)

        assert stats.removed == 0
        assert set(toy_state.learned_atoms()) == set(atoms)

    def test_constants_without_dual_atoms_keep_nothing(self, engine):
        """Test that every atom goes when the dual is empty."""
        state = AlgebraState(seed=0)
        a = state.add_constant("a")
        state.add_atom([a])
        state.add_atom([a])

        stats = engine.reduce_master(state)

        assert stats.atoms_after == 0
        assert stats.removed == 2

    @settings(max_examples=200, deadline=None)
    @given(random_algebras())
    def test_reduction_preserves_traces_of_random_algebras(self, state):
        """Test that Tr(c) of every constant survives on random atomizations."""
        trace_engine = TraceEngine(max_iterations=10000)
        before = [trace_engine.trace_bits(state, c) for c in state.constants()]

        stats = ReductionEngine(trace_engine).reduce_master(state)

        assert [trace_engine.trace_bits(state, c) for c in state.constants()] == before
        assert stats.atoms_after <= stats.atoms_before


class TestDualReduction:
    """Test suite for keeping one dual atom per negative relation."""

    @pytest.fixture
    def engine(self):
        return ReductionEngine()

    def test_one_dual_atom_per_negative(self, engine, toy_state, toy_bound):
        """Test that a duplicate discriminating dual atom is dropped."""
        TraceEngine().preprocess_duals(toy_state, toy_bound)
        negatives = [r for r in toy_bound if not r.is_positive]
        toy_state.add_dual_atom([toy_state.dual(negatives[0].rhs)])

        stats = engine.reduce_dual(toy_state, negatives)

        assert stats.atoms_before == 4
        assert stats.atoms_after == 3
        assert stats.removed == 1
        assert all(TraceEngine.reverted_holds(toy_state, r) for r in negatives)

    @patch("algebraic_learning.engines.reduction_engine.logger")
    def test_uncovered_negative_warns(self, mock_logger, engine):
        """Test the warning for a negative relation with no discriminating dual atom."""
        state = AlgebraState(seed=0)
        a, b = state.add_constant("a"), state.add_constant("b")

        stats = engine.reduce_dual(state, [Relation.negative(a, b)])

        assert stats.atoms_after == 0
        mock_logger.warning.assert_called_once()
        assert "1 negative" in mock_logger.warning.call_args[0][0]


class TestRedundantAtoms:
    """Test suite for fingerprint-based elimination of redundant atoms."""

    @pytest.fixture
    def engine(self):
        return ReductionEngine()

    @pytest.fixture
    def state(self):
        state = AlgebraState(seed=0)
        for name in ("a", "b", "c"):
            state.add_constant(name)
        return state

    def test_atom_covered_by_smaller_witnesses_is_removed(self, engine, state):
        """Test that {a, b} goes when {a} and {b} exist."""
        a, b = state.constant("a"), state.constant("b")
        small_a = state.add_atom([a])
        small_b = state.add_atom([b])
        state.add_atom([a, b])

        stats = engine.eliminate_redundant_atoms(state)

        assert set(stats.kept) == {small_a.index, small_b.index}
        assert stats.removed == 1

    def test_duplicate_fingerprints_keep_the_lower_index(self, engine, state):
        """Test that of two equal atoms the later one is removed."""
        a = state.constant("a")
        first = state.add_atom([a])
        state.add_atom([a])

        engine.eliminate_redundant_atoms(state)

        assert set(state.learned_atoms()) == {first.index}

    def test_atom_without_witness_stays(self, engine, state):
        """Test that an atom with a constant no other atom covers is kept."""
        a, b, c = (state.constant(n) for n in "abc")
        state.add_atom([a])
        state.add_atom([a, c])

        stats = engine.eliminate_redundant_atoms(state)

        assert stats.removed == 0
