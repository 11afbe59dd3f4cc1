from enum import Enum
from itertools import product
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, PositiveInt, model_validator

from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.exceptions.problem_exceptions import (
    DimensionMismatchException,
)

CLASS_CONSTANT = "v"


class BinaryImage(BaseModel):
    """A black and white image. Pixels are row-major, row 0 on top, 1 is black."""

    model_config = ConfigDict(frozen=True)

    width: PositiveInt
    height: PositiveInt
    pixels: Tuple[int, ...]

    @model_validator(mode="after")
    def check_pixels(self) -> "BinaryImage":
        if len(self.pixels) != self.width * self.height:
            raise ValueError(
                f"{len(self.pixels)} pixels for a {self.width}x{self.height} image"
            )
        if any(p not in (0, 1) for p in self.pixels):
            raise ValueError("pixels must be 0 (white) or 1 (black)")
        return self

    @classmethod
    def from_array(cls, array: np.ndarray) -> "BinaryImage":
        """Build an image from a (height, width) array of truthy values."""
        array = np.asarray(array)
        if array.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {array.shape}")
        height, width = array.shape
        pixels = tuple(int(p) for p in (array != 0).astype(np.uint8).ravel())
        return cls(width=width, height=height, pixels=pixels)

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> "BinaryImage":
        """Build an image from strings such as `["#.", "#."]`, `#` is black."""
        pixels = tuple(1 if ch == "#" else 0 for row in rows for ch in row)
        return cls(width=len(rows[0]), height=len(rows), pixels=pixels)

    def to_array(self) -> np.ndarray:
        return np.array(self.pixels, dtype=np.uint8).reshape(self.height, self.width)

    def pixel(self, row: int, col: int) -> bool:
        return self.pixels[row * self.width + col] == 1

    def complete_black_columns(self) -> int:
        return int(self.to_array().all(axis=0).sum())

    def render(self) -> str:
        return "\n".join(
            "".join("#" if self.pixel(r, c) else "." for c in range(self.width))
            for r in range(self.height)
        )


class LabeledExample(BaseModel):
    """An image with its binary label. `category` keeps the source class (IDX digit)."""

    model_config = ConfigDict(frozen=True)

    image: BinaryImage
    label: bool
    category: Optional[int] = None


class BarLabeler(Enum):
    HAS_VERTICAL_BAR = "has-vertical-bar"
    PARITY_OF_BARS = "parity-of-bars"

    def label(self, image: BinaryImage) -> bool:
        bars = image.complete_black_columns()
        if self is BarLabeler.HAS_VERTICAL_BAR:
            return bars > 0
        return bars % 2 == 1


class ImageEncoder:
    """Maps images of one size onto pixel constants and a class constant.

    Every pixel gives two constants, `p{row}_{col}b` for black and
    `p{row}_{col}w` for white. An image is the merge of one constant per pixel.
    """

    def __init__(
        self, width: int, height: int, class_constant: str = CLASS_CONSTANT
    ) -> None:
        if width < 1 or height < 1:
            raise ValueError(f"invalid image size {width}x{height}")
        self.width = width
        self.height = height
        self.class_constant = class_constant

    @staticmethod
    def pixel_constant(row: int, col: int, black: bool) -> str:
        return f"p{row}_{col}{'b' if black else 'w'}"

    @property
    def pixel_constant_count(self) -> int:
        return 2 * self.width * self.height

    def constant_names(self) -> List[str]:
        cells = list(product(range(self.height), range(self.width)))
        names = [self.pixel_constant(r, c, True) for r, c in cells]
        names += [self.pixel_constant(r, c, False) for r, c in cells]
        return names + [self.class_constant]

    def register(self, state: AlgebraState) -> None:
        for name in self.constant_names():
            state.ensure_constant(name)

    def term_names(self, image: BinaryImage) -> Tuple[str, ...]:
        if (image.width, image.height) != (self.width, self.height):
            raise DimensionMismatchException(
                details=f"{image.width}x{image.height} image, "
                f"encoder for {self.width}x{self.height}"
            )
        return tuple(
            self.pixel_constant(r, c, image.pixel(r, c))
            for r in range(self.height)
            for c in range(self.width)
        )

    def encode(self, example: LabeledExample) -> RelationSpec:
        """`v < image` for a positive example, `not(v < image)` otherwise."""
        names = self.term_names(example.image)
        if example.label:
            return RelationSpec.positive(self.class_constant, names)
        return RelationSpec.negative(self.class_constant, names)

    def encode_all(self, examples: Iterable[LabeledExample]) -> List[RelationSpec]:
        return [self.encode(example) for example in examples]


def make_bar_image(
    rng: np.random.Generator,
    width: int,
    height: int,
    noise: float,
    bar_columns: Iterable[int] = (),
) -> BinaryImage:
    """Black columns at `bar_columns`, other pixels black with probability `noise`."""
    pixels = rng.random((height, width)) < noise
    for col in bar_columns:
        pixels[:, col] = True
    return BinaryImage.from_array(pixels)


def sample_bar_example(
    rng: np.random.Generator,
    width: int,
    height: int,
    noise: float,
    labeler: BarLabeler,
    positive: bool,
) -> LabeledExample:
    """Draw images until one carries the requested label."""
    while True:
        if labeler is BarLabeler.HAS_VERTICAL_BAR:
            bars = int(rng.integers(1, width + 1)) if positive else 0
        else:
            bars = int(rng.integers(0, width + 1))
        columns = rng.choice(width, size=bars, replace=False)
        image = make_bar_image(rng, width, height, noise, columns)
        if labeler.label(image) == positive:
            return LabeledExample(image=image, label=positive)


def gen_bar_images(
    width: int,
    height: int,
    noise: float,
    labeler: BarLabeler,
    count: int,
    seed: Optional[int] = 0,
) -> List[LabeledExample]:
    """Balanced bar images, positives first in alternation, reproducible by seed.

    The label is read from the complete black columns of the final image.
    """
    if not 0 <= noise < 1:
        raise ValueError(f"noise must be in [0, 1), got {noise}")
    rng = np.random.default_rng(seed)
    return [
        sample_bar_example(rng, width, height, noise, labeler, i % 2 == 0)
        for i in range(count)
    ]


def all_images(width: int, height: int) -> Iterator[BinaryImage]:
    for pixels in product((0, 1), repeat=width * height):
        yield BinaryImage(width=width, height=height, pixels=pixels)


def exhaustive_dataset(
    width: int, height: int, labeler: BarLabeler = BarLabeler.HAS_VERTICAL_BAR
) -> List[LabeledExample]:
    """Every image of the grid with its bar label."""
    return [
        LabeledExample(image=image, label=labeler.label(image))
        for image in all_images(width, height)
    ]
