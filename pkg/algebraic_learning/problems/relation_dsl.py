"""Text format for relation sets.

One relation per line, `pos <lhs> < <rhs>` or `neg <lhs> < <rhs>`, where a
side is a constant name or several names joined by `+`. Blank lines and lines
starting with `#` are ignored.
"""

from pathlib import Path
from typing import Iterable, List, Union

from algebraic_learning.algebra.elements import RelationSpec, Sign
from algebraic_learning.exceptions.problem_exceptions import RelationSyntaxException

_SIGNS = {sign.value: sign for sign in Sign}


def parse_relation(line: str, line_number: int = 1) -> RelationSpec:
    parts = line.split(None, 1)
    if len(parts) != 2 or parts[0] not in _SIGNS:
        raise RelationSyntaxException(
            details=f"line {line_number}: expected 'pos' or 'neg' in {line!r}"
        )
    sides = parts[1].split("<")
    if len(sides) != 2:
        raise RelationSyntaxException(
            details=f"line {line_number}: expected exactly one '<' in {line!r}"
        )
    lhs, rhs = (_side(side, line_number) for side in sides)
    return RelationSpec(sign=_SIGNS[parts[0]], lhs=lhs, rhs=rhs)


def _side(text: str, line_number: int) -> List[str]:
    names = [name.strip() for name in text.split("+")]
    if not all(names) or any(len(name.split()) != 1 for name in names):
        raise RelationSyntaxException(
            details=f"line {line_number}: bad term {text.strip()!r}"
        )
    return names


def parse_relations(text: str) -> List[RelationSpec]:
    relations = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            relations.append(parse_relation(line, number))
    return relations


def format_relation(spec: RelationSpec) -> str:
    return f"{spec.sign.value} {'+'.join(spec.lhs)} < {'+'.join(spec.rhs)}"


def format_relations(specs: Iterable[RelationSpec]) -> str:
    return "".join(format_relation(spec) + "\n" for spec in specs)


def load_relations(path: Union[str, Path]) -> List[RelationSpec]:
    return parse_relations(Path(path).read_text(encoding="utf-8"))


def save_relations(path: Union[str, Path], specs: Iterable[RelationSpec]) -> None:
    Path(path).write_text(format_relations(specs), encoding="utf-8")
