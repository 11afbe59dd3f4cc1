from algebraic_learning.algebra.algebra_state import BOTTOM, AlgebraState
from algebraic_learning.algebra.atom_set import AtomSet
from algebraic_learning.algebra.elements import (
    ElementKind,
    ElementRef,
    Relation,
    RelationSpec,
    Sign,
)

__all__ = [
    "BOTTOM",
    "AlgebraState",
    "AtomSet",
    "ElementKind",
    "ElementRef",
    "Relation",
    "RelationSpec",
    "Sign",
]
