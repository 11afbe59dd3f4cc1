from enum import Enum
from typing import NamedTuple, Tuple

from pydantic import BaseModel, ConfigDict, field_validator


class ElementKind(Enum):
    """Kinds of elements living in the master algebra and in its dual."""

    CONSTANT = "constant"
    TERM = "term"
    ATOM = "atom"
    DUAL_CONSTANT = "dual_constant"
    DUAL_OF_ATOM = "dual_of_atom"
    DUAL_ATOM = "dual_atom"

    @property
    def is_master(self) -> bool:
        return self in (ElementKind.CONSTANT, ElementKind.TERM, ElementKind.ATOM)


class ElementRef(NamedTuple):
    """Typed identifier of an element. Indices are dense per kind."""

    kind: ElementKind
    index: int

    @property
    def is_master(self) -> bool:
        return self.kind.is_master

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.index}"


class Sign(Enum):
    POSITIVE = "pos"
    NEGATIVE = "neg"


class Relation(NamedTuple):
    """An order relation `lhs < rhs` or its negation between master elements."""

    sign: Sign
    lhs: ElementRef
    rhs: ElementRef

    @property
    def is_positive(self) -> bool:
        return self.sign is Sign.POSITIVE

    @classmethod
    def positive(cls, lhs: ElementRef, rhs: ElementRef) -> "Relation":
        return cls(Sign.POSITIVE, lhs, rhs)

    @classmethod
    def negative(cls, lhs: ElementRef, rhs: ElementRef) -> "Relation":
        return cls(Sign.NEGATIVE, lhs, rhs)


class RelationSpec(BaseModel):
    """A relation written with constant names.

    A side with one name is that constant; a side with several names is the
    merge of those constants.
    """

    model_config = ConfigDict(frozen=True)

    sign: Sign
    lhs: Tuple[str, ...]
    rhs: Tuple[str, ...]

    @field_validator("lhs", "rhs")
    @classmethod
    def non_empty_side(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        if not value:
            raise ValueError("a relation side needs at least one constant name")
        return tuple(value)

    @property
    def is_positive(self) -> bool:
        return self.sign is Sign.POSITIVE

    @classmethod
    def positive(cls, lhs, rhs) -> "RelationSpec":
        return cls(sign=Sign.POSITIVE, lhs=_names(lhs), rhs=_names(rhs))

    @classmethod
    def negative(cls, lhs, rhs) -> "RelationSpec":
        return cls(sign=Sign.NEGATIVE, lhs=_names(lhs), rhs=_names(rhs))


def _names(side) -> Tuple[str, ...]:
    if isinstance(side, str):
        return (side,)
    return tuple(side)
