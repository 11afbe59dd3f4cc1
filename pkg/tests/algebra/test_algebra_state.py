import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra_strategies import random_algebras
from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.algebra.atom_set import AtomSet
from algebraic_learning.algebra.elements import (
    ElementKind,
    ElementRef,
    Relation,
    RelationSpec,
)
from algebraic_learning.exceptions.algebra_exceptions import (
    DualElementGivenException,
    DuplicateNameException,
    EmptyTermException,
    MixedAlgebrasException,
    UnknownAtomException,
    UnknownConstantException,
    UnknownTargetException,
)

BOTTOM = ElementRef(ElementKind.ATOM, 0)


class TestMasterAlgebra:
    """Test suite for constants, terms and atoms of the master algebra."""

    @pytest.fixture
    def state(self):
        state = AlgebraState(seed=3)
        for name in ("a", "b", "c"):
            state.add_constant(name)
        return state

    def test_new_constant_holds_only_the_bottom_atom(self, state):
        """Test that a fresh constant has atom set {0} and dual {0*}."""
        a = state.constant("a")

        assert state.atoms_of(a) == AtomSet([0])
        assert state.dual_atoms_of(a) == AtomSet([0])
        assert state.atom_count == 0

    def test_duplicate_constant_rejected(self, state):
        """Test that registering a name twice raises DuplicateNameException."""
        with pytest.raises(DuplicateNameException):
            state.add_constant("a")

    def test_ensure_constant_reuses_existing(self, state):
        """Test that ensure_constant returns the registered reference."""
        assert state.ensure_constant("b") == state.constant("b")
        assert state.ensure_constant("d").index == 3

    def test_unknown_constant(self, state):
        """Test that looking up an unregistered name raises UnknownConstantException."""
        with pytest.raises(UnknownConstantException):
            state.constant("zzz")

    def test_equal_components_give_the_same_term(self, state):
        """Test that terms are deduplicated by component set."""
        a, b = state.constant("a"), state.constant("b")

        first = state.define_term([a, b])
        second = state.define_term([b, a, b])

        assert first == second
        assert state.term_count == 1
        assert state.components(first) == frozenset({0, 1})

    def test_empty_term_rejected(self, state):
        """Test that a term without components raises EmptyTermException."""
        with pytest.raises(EmptyTermException):
            state.define_term([])

    def test_term_atoms_are_the_union_of_its_components(self, state):
        """Test the atom set of a term."""
        a, b = state.constant("a"), state.constant("b")
        phi = state.add_atom([a])
        psi = state.add_atom([b])
        term = state.define_term([a, b])

        assert state.atoms_of(term) == AtomSet([0, phi.index, psi.index])
        assert state.leq(a, term)
        assert not state.leq(term, a)

    def test_atom_edged_to_an_atom_inherits_its_fingerprint(self, state):
        """Test that an atom below another atom ends below the same constants."""
        a, c = state.constant("a"), state.constant("c")
        phi = state.add_atom([a, c])
        psi = state.add_atom([phi])

        assert state.fingerprint(psi) == frozenset({0, 2})

    def test_bottom_fingerprint_is_every_constant(self, state):
        """Test that the bottom atom lies below all constants."""
        assert state.fingerprint(BOTTOM) == frozenset({0, 1, 2})

    def test_bottom_atom_cannot_be_deleted(self, state):
        """Test that deleting atom 0 raises UnknownAtomException."""
        with pytest.raises(UnknownAtomException):
            state.delete_atoms([BOTTOM])

    def test_delete_atoms_updates_every_constant(self, state):
        """Test that deleted atoms vanish from all atom sets."""
        a, b = state.constant("a"), state.constant("b")
        phi = state.add_atom([a, b])

        state.delete_atoms([phi])

        assert state.atoms_of(a) == AtomSet([0])
        assert state.atoms_of(b) == AtomSet([0])
        assert state.atom_count == 0
        assert state.verify_closure()

    def test_add_atom_to_unknown_target(self, state):
        """Test that edging an atom to a missing element raises UnknownTargetException."""
        with pytest.raises(UnknownTargetException):
            state.add_atom([ElementRef(ElementKind.CONSTANT, 17)])
        with pytest.raises(UnknownTargetException):
            state.add_atom_with_fingerprint(1 << 5)

    def test_leq_between_algebras_rejected(self, state):
        """Test that comparing a master and a dual element raises MixedAlgebrasException."""
        a = state.constant("a")

        with pytest.raises(MixedAlgebrasException):
            state.leq(a, state.dual(a))

    def test_holds_follows_the_relation_sign(self, state):
        """Test holds for a positive and a negative relation."""
        a, b = state.constant("a"), state.constant("b")
        state.add_atom([a])

        assert not state.holds(Relation.positive(a, b))
        assert state.holds(Relation.negative(a, b))
        state.add_atom([a, b])
        assert state.holds(Relation.positive(b, b))

    def test_bind_builds_terms_for_merged_sides(self, state):
        """Test that bind resolves names and merges multi-name sides."""
        relation = state.bind(RelationSpec.positive("a", ["b", "new"]))

        assert relation.lhs == state.constant("a")
        assert relation.rhs.kind is ElementKind.TERM
        assert state.has_constant("new")
        assert state.components(relation.rhs) == frozenset(
            {state.constant("b").index, state.constant("new").index}
        )

    def test_bind_without_create(self, state):
        """Test that bind with create=False refuses unknown names."""
        with pytest.raises(UnknownConstantException):
            state.bind(RelationSpec.negative("a", "missing"), create=False)

    def test_retire_term(self, state):
        """Test that a retired term is gone and its index is not reused."""
        term = state.define_term([state.constant("a"), state.constant("b")])

        state.retire_term(term)

        assert state.terms() == []
        with pytest.raises(UnknownConstantException):
            state.component_bits(term)
        with pytest.raises(UnknownTargetException):
            state.retire_term(term)
        assert state.define_term([state.constant("a"), state.constant("c")]).index == 1

    def test_seeded_randomness_is_reproducible(self):
        """Test that two states with one seed shuffle alike."""
        items = list(range(20))

        assert AlgebraState(7).shuffled(items) == AlgebraState(7).shuffled(items)
        assert AlgebraState(7).choose_bit(0b101000) in (3, 5)
        with pytest.raises(ValueError):
            AlgebraState(7).choose([])


class TestDualAlgebra:
    """Test suite for the dual graph, its closure and its rebuild."""

    @pytest.fixture
    def state(self):
        state = AlgebraState(seed=0)
        for name in ("a", "b", "c"):
            state.add_constant(name)
        return state

    def test_dual_atom_below_a_constant(self, state):
        """Test that a placed dual atom is below the dual of its constant only."""
        a, b = state.constant("a"), state.constant("b")

        zeta = state.add_dual_atom([state.dual(a)])

        assert zeta.index in state.dual_atoms_of(a)
        assert zeta.index not in state.dual_atoms_of(b)
        assert state.dual_atom_count == 1
        assert zeta.index in state.dual_universe()

    def test_positive_edge_carries_dual_atoms(self, state):
        """Test that a < b sends the dual atoms of [b] to [a]."""
        a, b = state.constant("a"), state.constant("b")
        zeta = state.add_dual_atom([state.dual(b)])

        state.add_dual_positive_edge(Relation.positive(a, b))

        assert zeta.index in state.dual_atoms_of(a)
        assert state.has_dual_edge(b, a)
        with pytest.raises(ValueError):
            state.add_dual_positive_edge(Relation.negative(a, b))

    def test_term_gets_dual_atoms_shared_by_all_components(self, state):
        """Test the dual term closure."""
        a, b = state.constant("a"), state.constant("b")
        term = state.define_term([a, b])

        zeta = state.add_dual_atom([state.dual(a)])
        assert zeta.index not in state.dual_atoms_of(term)

        state.add_dual_atom_target(zeta, state.dual(b))
        assert zeta.index in state.dual_atoms_of(term)

    def test_dual_atom_under_a_term_reaches_its_components(self, state):
        """Test that [T] -> [c] edges exist for every component c."""
        a, b, c = (state.constant(n) for n in "abc")
        term = state.define_term([a, b])

        zeta = state.add_dual_atom([state.dual(term)])

        assert zeta.index in state.dual_atoms_of(a)
        assert zeta.index in state.dual_atoms_of(b)
        assert zeta.index not in state.dual_atoms_of(c)

    def test_subset_terms_have_implied_edges(self, state):
        """Test that [S] -> [T] is implied when components(T) are within components(S)."""
        a, b, c = (state.constant(n) for n in "abc")
        small = state.define_term([a, b])
        large = state.define_term([a, b, c])

        assert state.has_dual_edge(large, small)
        assert not state.has_dual_edge(small, large)

    def test_cycle_of_positive_edges_merges_duals(self, state):
        """Test that a < b and b < a make [a] and [b] one dual element."""
        a, b = state.constant("a"), state.constant("b")

        state.add_dual_positive_edge(Relation.positive(a, b))
        state.add_dual_positive_edge(Relation.positive(b, a))

        assert state.same_dual(a, b)
        assert not state.same_dual(a, state.constant("c"))

    def test_deferred_placement_is_closed_on_query(self, state):
        """Test that close=False placements are visible after the next query."""
        a, b = state.constant("a"), state.constant("b")
        state.add_dual_positive_edge(Relation.positive(a, b))

        zeta = state.add_dual_atom([state.dual(b)], close=False)

        assert zeta.index in state.dual_atoms_of(a)
        assert state.verify_closure()

    def test_atom_dual_collects_the_duals_of_its_constants(self, state):
        """Test GL^a of the dual of a master atom."""
        a, b = state.constant("a"), state.constant("b")
        zeta = state.add_dual_atom([state.dual(b)])
        phi = state.add_atom([a, b])

        assert state.atom_dual_bits(phi.index) == 1 | 1 << zeta.index
        assert state.dual_bits(state.dual(phi)) == 1 | 1 << zeta.index

    def test_dual_atoms_cannot_be_placed_on_atom_duals(self, state):
        """Test that [phi] only collects the duals of its constants."""
        a, b = state.constant("a"), state.constant("b")
        phi = state.add_atom([a])
        zeta = state.add_dual_atom([state.dual(b)])

        with pytest.raises(UnknownTargetException):
            state.add_dual_atom([state.dual(phi)])
        with pytest.raises(UnknownTargetException):
            state.add_dual_atom_target(zeta, phi)

        crossed = state.add_atom([phi, b])
        assert state.atom_dual_bits(crossed.index) == 1 | 1 << zeta.index
        assert state.atom_dual_bits(phi.index) == 1

    def test_reset_dual_keeps_terms_and_drops_everything_else(self, state):
        """Test that reset_dual removes dual atoms and edges but keeps term links."""
        a, b = state.constant("a"), state.constant("b")
        term = state.define_term([a, b])
        state.add_dual_positive_edge(Relation.positive(a, b))
        state.add_dual_atom([state.dual(b)])

        state.reset_dual()

        assert state.dual_atom_count == 0
        assert not state.has_dual_edge(b, a)
        zeta = state.add_dual_atom([state.dual(term)])
        assert zeta.index in state.dual_atoms_of(a)

    def test_delete_dual_atoms(self, state):
        """Test dual atom deletion and the permanent 0*."""
        a = state.constant("a")
        zeta = state.add_dual_atom([state.dual(a)])

        state.delete_dual_atoms([zeta])

        assert state.dual_atoms_of(a) == AtomSet([0])
        with pytest.raises(UnknownAtomException):
            state.delete_dual_atoms([ElementRef(ElementKind.DUAL_ATOM, 0)])

    def test_dual_of_a_dual_element_rejected(self, state):
        """Test that dual() of a dual element raises DualElementGivenException."""
        dual_a = state.dual(state.constant("a"))

        with pytest.raises(DualElementGivenException):
            state.dual(dual_a)

    def test_dual_leq(self, state):
        """Test the order between dual elements."""
        a, b = state.constant("a"), state.constant("b")
        state.add_dual_atom([state.dual(a), state.dual(b)])
        state.add_dual_atom([state.dual(b)])

        assert state.leq(state.dual(a), state.dual(b))
        assert not state.leq(state.dual(b), state.dual(a))


class TestOrderLaws:
    """Property suite for the order of random atomizations."""

    @settings(max_examples=100, deadline=None)
    @given(random_algebras(), st.data())
    def test_leq_is_a_preorder_with_merges_as_joins(self, state, data):
        """Test reflexivity, transitivity and the join property of terms."""
        constants = state.constants()
        x, y, z = (data.draw(st.sampled_from(constants)) for _ in range(3))

        assert state.leq(x, x)
        if state.leq(x, y) and state.leq(y, z):
            assert state.leq(x, z)
        if x != y:
            term = state.define_term([x, y])
            assert state.leq(x, term) and state.leq(y, term)
            assert state.leq(term, z) == (state.leq(x, z) and state.leq(y, z))
        assert state.verify_closure()
