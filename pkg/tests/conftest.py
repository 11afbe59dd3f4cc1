"""Shared fixtures: the 2x2 toy world and small helpers for fresh algebras."""

from typing import List

import pytest

from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.problems.images import BinaryImage, ImageEncoder, LabeledExample
from algebraic_learning.training.models import ModelSnapshot

# Row 0 is the top row. The class is "has a complete black column".
TOY_ROWS = [
    (["#.", "#."], True),
    ([".#", ".#"], True),
    (["#.", ".#"], False),
    ([".#", ".."], False),
    (["..", ".#"], False),
]

# Two atoms below the class constant that classify the toy relations without error.
TOY_END_STATE = [("p1_0b", "p0_1b", "v"), ("p1_0b", "p1_1b", "v")]


@pytest.fixture
def toy_encoder() -> ImageEncoder:
    return ImageEncoder(width=2, height=2)


@pytest.fixture
def toy_examples() -> List[LabeledExample]:
    return [
        LabeledExample(image=BinaryImage.from_rows(rows), label=label)
        for rows, label in TOY_ROWS
    ]


@pytest.fixture
def toy_relations(toy_encoder, toy_examples) -> List[RelationSpec]:
    """v < T1+, v < T2+ and the three negatives, in that order."""
    return toy_encoder.encode_all(toy_examples)


@pytest.fixture
def toy_state(toy_encoder) -> AlgebraState:
    state = AlgebraState(seed=0)
    toy_encoder.register(state)
    return state


@pytest.fixture
def toy_snapshot(toy_encoder) -> ModelSnapshot:
    names = toy_encoder.constant_names()
    index = {name: i for i, name in enumerate(names)}
    atoms = sorted(tuple(sorted(index[n] for n in atom)) for atom in TOY_END_STATE)
    return ModelSnapshot(constants=names, atoms=atoms)


@pytest.fixture
def toy_bound(toy_state, toy_relations):
    """The toy relations bound on `toy_state`."""
    return [toy_state.bind(spec) for spec in toy_relations]
