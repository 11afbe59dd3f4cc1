from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from algebraic_learning.exceptions.problem_exceptions import (
    BadMagicException,
    CountMismatchException,
    TruncatedFileException,
)
from algebraic_learning.logger import get_logger
from algebraic_learning.problems.images import BinaryImage, LabeledExample

logger = get_logger(__name__)

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801

PathLike = Union[str, Path]


def _header(data: bytes, words: int, path: PathLike) -> List[int]:
    if len(data) < 4 * words:
        raise TruncatedFileException(details=f"{path}: header needs {4 * words} bytes")
    return [int.from_bytes(data[4 * i : 4 * i + 4], "big") for i in range(words)]


def read_idx_images(path: PathLike) -> np.ndarray:
    """Raw unsigned bytes of an image file, shaped (count, rows, cols)."""
    data = Path(path).read_bytes()
    magic, count, rows, cols = _header(data, 4, path)
    if magic != IMAGE_MAGIC:
        raise BadMagicException(details=f"{path}: {magic:#010x}")
    size = count * rows * cols
    if len(data) < 16 + size:
        raise TruncatedFileException(
            details=f"{path}: expected {size} pixel bytes, found {len(data) - 16}"
        )
    return np.frombuffer(data, dtype=np.uint8, count=size, offset=16).reshape(
        count, rows, cols
    )


def read_idx_labels(path: PathLike) -> np.ndarray:
    data = Path(path).read_bytes()
    magic, count = _header(data, 2, path)
    if magic != LABEL_MAGIC:
        raise BadMagicException(details=f"{path}: {magic:#010x}")
    if len(data) < 8 + count:
        raise TruncatedFileException(
            details=f"{path}: expected {count} labels, found {len(data) - 8}"
        )
    return np.frombuffer(data, dtype=np.uint8, count=count, offset=8)


def load_idx(
    image_path: PathLike,
    label_path: PathLike,
    threshold: int = 128,
    positive_digit: Optional[int] = None,
) -> List[LabeledExample]:
    """Binarized examples of an IDX image/label pair. Pixels >= threshold are black.

    Without `positive_digit` every label is False; `category` keeps the digit.
    """
    images = read_idx_images(image_path)
    labels = read_idx_labels(label_path)
    if len(images) != len(labels):
        raise CountMismatchException(
            details=f"{len(images)} images, {len(labels)} labels"
        )
    logger.info(f"Loaded {len(images)} images of {images.shape[1]}x{images.shape[2]}")
    return [
        LabeledExample(
            image=BinaryImage.from_array(pixels >= threshold),
            label=positive_digit is not None and int(digit) == positive_digit,
            category=int(digit),
        )
        for pixels, digit in zip(images, labels)
    ]


def one_vs_rest(examples: Sequence[LabeledExample], digit: int) -> List[LabeledExample]:
    return [
        example.model_copy(update={"label": example.category == digit})
        for example in examples
    ]


def write_idx(
    image_path: PathLike,
    label_path: PathLike,
    images: np.ndarray,
    labels: Sequence[int],
) -> Tuple[Path, Path]:
    """Write a (count, rows, cols) uint8 array and its labels as an IDX pair."""
    images = np.asarray(images, dtype=np.uint8)
    count, rows, cols = images.shape
    header = b"".join(
        value.to_bytes(4, "big") for value in (IMAGE_MAGIC, count, rows, cols)
    )
    Path(image_path).write_bytes(header + images.tobytes())
    label_header = LABEL_MAGIC.to_bytes(4, "big") + len(labels).to_bytes(4, "big")
    Path(label_path).write_bytes(label_header + bytes(np.asarray(labels, dtype=np.uint8)))
    return Path(image_path), Path(label_path)
