"""Hypothesis strategies and brute-force oracles shared by the property suites.

Relation sets are read off a hidden atomization over constants `c0..cN`, so
every generated set is consistent.
"""

from typing import FrozenSet, List, Sequence, Set

from hypothesis import strategies as st

from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.algebra.elements import ElementKind, ElementRef, RelationSpec
from algebraic_learning.training.models import ModelSnapshot


def constant_name(index: int) -> str:
    return f"c{index}"


def hidden_holds(atoms: Sequence[int], lhs: int, rhs: int) -> bool:
    return all(mask & rhs for mask in atoms if mask & lhs)


@st.composite
def consistent_relations(
    draw, max_constants: int = 6, max_relations: int = 8, max_rhs: int = 3
) -> List[RelationSpec]:
    n = draw(st.integers(min_value=2, max_value=max_constants))
    atoms = draw(
        st.lists(st.integers(min_value=1, max_value=2**n - 1), min_size=1, max_size=6)
    )
    count = draw(st.integers(min_value=1, max_value=max_relations))
    relations = []
    for _ in range(count):
        lhs = draw(st.integers(min_value=0, max_value=n - 1))
        rhs = draw(
            st.sets(st.integers(min_value=0, max_value=n - 1), min_size=1, max_size=max_rhs)
        )
        rhs_mask = sum(1 << c for c in rhs)
        names = [constant_name(c) for c in sorted(rhs)]
        if hidden_holds(atoms, 1 << lhs, rhs_mask):
            relations.append(RelationSpec.positive(constant_name(lhs), names))
        else:
            relations.append(RelationSpec.negative(constant_name(lhs), names))
    return relations


@st.composite
def random_algebras(draw, max_constants: int = 12) -> AlgebraState:
    """Constants, atoms with random fingerprints and dual atoms under random constants."""
    n = draw(st.integers(min_value=2, max_value=max_constants))
    state = AlgebraState(seed=draw(st.integers(min_value=0, max_value=2**16)))
    for i in range(n):
        state.add_constant(constant_name(i))
    for fingerprint in draw(
        st.lists(st.integers(min_value=1, max_value=2**n - 1), min_size=1, max_size=10)
    ):
        state.add_atom_with_fingerprint(fingerprint)
    for targets in draw(
        st.lists(
            st.sets(st.integers(min_value=0, max_value=n - 1), min_size=1, max_size=3),
            max_size=6,
        )
    ):
        state.add_dual_atom(
            [state.dual(ElementRef(ElementKind.CONSTANT, c)) for c in sorted(targets)]
        )
    return state


def horn_closure(names: Sequence[str], relations: Sequence[RelationSpec]) -> FrozenSet[str]:
    """Constants entailed below the merge of `names` by the positive relations."""
    closed: Set[str] = set(names)
    positives = [r for r in relations if r.is_positive]
    changed = True
    while changed:
        changed = False
        for relation in positives:
            if set(relation.rhs) <= closed and not set(relation.lhs) <= closed:
                closed |= set(relation.lhs)
                changed = True
    return frozenset(closed)


@st.composite
def snapshot_votes(draw, max_constants: int = 6, max_snapshots: int = 10):
    """Snapshots sharing one table, the class constant and a query over the rest."""
    n = draw(st.integers(min_value=2, max_value=max_constants))
    constants = [constant_name(i) for i in range(n)]
    fingerprint = st.sets(st.integers(min_value=0, max_value=n - 1), min_size=1)
    snapshots = [
        ModelSnapshot(
            constants=constants,
            atoms=[tuple(sorted(f)) for f in draw(st.lists(fingerprint, max_size=6))],
        )
        for _ in range(draw(st.integers(min_value=1, max_value=max_snapshots)))
    ]
    query = draw(st.sets(st.sampled_from(constants[1:]), min_size=1))
    return snapshots, constants[0], sorted(query)
