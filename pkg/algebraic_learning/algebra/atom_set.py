"""An immutable set of atom indices stored as the bits of an integer."""

from typing import AbstractSet, Any, Iterable, Iterator


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the positions of the set bits of `bits` in ascending order."""
    while bits:
        lowest = bits & -bits
        yield lowest.bit_length() - 1
        bits ^= lowest


def bits_of(indices: Iterable[int]) -> int:
    """Pack non-negative integers into a bit mask."""
    bits = 0
    for index in indices:
        if index < 0:
            raise ValueError(f"index not greater than or equal to 0, index == {index}")
        bits |= 1 << index
    return bits


class AtomSet(AbstractSet[int]):
    """A frozen set of atom indices.

    Iteration is always in ascending index order so that seeded runs
    see the same sequence of atoms.
    """

    __slots__ = ("bits",)

    def __init__(self, indices: Iterable[int] = ()) -> None:
        self.bits = bits_of(indices)

    @classmethod
    def from_bits(cls, bits: int) -> "AtomSet":
        atom_set = cls.__new__(cls)
        atom_set.bits = bits
        return atom_set

    def __contains__(self, index: Any) -> bool:
        return isinstance(index, int) and index >= 0 and bool(self.bits >> index & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __hash__(self) -> int:
        return hash(self.bits)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, AtomSet):
            return self.bits == other.bits
        return super().__eq__(other)

    def __le__(self, other: Any) -> bool:
        if isinstance(other, AtomSet):
            return self.bits & ~other.bits == 0
        return super().__le__(other)

    def __or__(self, other: Any) -> "AtomSet":
        return AtomSet.from_bits(self.bits | AtomSet._coerce(other))

    def __and__(self, other: Any) -> "AtomSet":
        return AtomSet.from_bits(self.bits & AtomSet._coerce(other))

    def __sub__(self, other: Any) -> "AtomSet":
        return AtomSet.from_bits(self.bits & ~AtomSet._coerce(other))

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({list(self)})"

    @staticmethod
    def _coerce(other: Any) -> int:
        if isinstance(other, AtomSet):
            return other.bits
        return bits_of(other)

    def without(self, index: int) -> "AtomSet":
        return AtomSet.from_bits(self.bits & ~(1 << index))

    def min(self) -> int:
        if not self.bits:
            raise ValueError("min() of an empty AtomSet")
        return (self.bits & -self.bits).bit_length() - 1
