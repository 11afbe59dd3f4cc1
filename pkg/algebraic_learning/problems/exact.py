import math
from itertools import product
from typing import Optional

from algebraic_learning.config import Config, EnvironmentVariables
from algebraic_learning.exceptions.learning_exceptions import (
    SizeLimitExceededException,
)
from algebraic_learning.problems.images import ImageEncoder
from algebraic_learning.training.models import ModelSnapshot


def exact_vertical_bar_atomization(
    rows: int, cols: int, max_atoms: Optional[int] = None
) -> ModelSnapshot:
    """The exact model of "the image has a complete black column".

    One atom per choice of a row in every column, below the black constants
    of the chosen pixels and below the class constant. The constant table is
    the one of `ImageEncoder(cols, rows)`.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"invalid grid {rows}x{cols}")
    if max_atoms is None:
        max_atoms = Config.get_int(EnvironmentVariables.ALGEBRA_EXACT_ATOM_CAP, 100000)
    count = rows**cols
    if count > max_atoms:
        raise SizeLimitExceededException(
            details=f"{rows}^{cols} = {count} atoms, cap {max_atoms}"
        )

    encoder = ImageEncoder(width=cols, height=rows)
    constants = encoder.constant_names()
    index = {name: i for i, name in enumerate(constants)}
    v = index[encoder.class_constant]
    atoms = []
    for choice in product(range(rows), repeat=cols):
        fingerprint = {
            index[encoder.pixel_constant(row, col, True)]
            for col, row in enumerate(choice)
        }
        fingerprint.add(v)
        atoms.append(tuple(sorted(fingerprint)))
    return ModelSnapshot(constants=constants, atoms=sorted(atoms))


def required_atom_count(noise: float, bar_length: int, target_fpr: float) -> int:
    """Atoms needed so a noisy bar-free image passes them all with probability below target_fpr."""
    if not 0 < noise < 1:
        raise ValueError(f"noise must be in (0, 1), got {noise}")
    if target_fpr <= 0:
        raise ValueError(f"target_fpr must be positive, got {target_fpr}")
    if target_fpr >= 1:
        return 0
    return math.ceil(math.log(target_fpr) / math.log(1 - (1 - noise) ** bar_length))
