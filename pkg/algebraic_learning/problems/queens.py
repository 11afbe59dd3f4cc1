from enum import Enum
from itertools import combinations
from string import ascii_lowercase
from typing import FrozenSet, Iterable, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.exceptions.problem_exceptions import (
    InvalidBoardConfigException,
    UndecidedSquaresException,
)
from algebraic_learning.training.models import ModelSnapshot

Square = Tuple[int, int]
"""(file, rank), both 0-based. File 0 is `a`, rank 0 is `1`."""

UNIVERSE = "U"
SOLUTION = "S"


class SquareState(Enum):
    QUEEN = "Q"
    EMPTY = "."
    UNKNOWN = "?"
    CONFLICT = "!"


class BoardSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    size: int = Field(ge=1, le=len(ascii_lowercase))
    blocked: FrozenSet[Square] = frozenset()

    @classmethod
    def parse(cls, size: int, blocked: Iterable[str] = ()) -> "BoardSpec":
        """Build a board from algebraic square names such as `b4`."""
        return cls(size=size, blocked=frozenset(parse_square(s) for s in blocked))


def parse_square(name: str) -> Square:
    name = name.strip().lower()
    if len(name) < 2 or name[0] not in ascii_lowercase or not name[1:].isdigit():
        raise InvalidBoardConfigException(details=f"bad square name {name!r}")
    return ascii_lowercase.index(name[0]), int(name[1:]) - 1


def square_name(square: Square) -> str:
    file, rank = square
    return f"{ascii_lowercase[file]}{rank + 1}"


def attacks(a: Square, b: Square) -> bool:
    """Queens on a and b share a rank, a file or a diagonal."""
    if a == b:
        return False
    df, dr = abs(a[0] - b[0]), abs(a[1] - b[1])
    return df == 0 or dr == 0 or df == dr


def attacked_squares(square: Square, size: int) -> List[Square]:
    return [
        (f, r) for f in range(size) for r in range(size) if attacks(square, (f, r))
    ]


def validate_spec(spec: BoardSpec) -> None:
    for file, rank in spec.blocked:
        if not (0 <= file < spec.size and 0 <= rank < spec.size):
            raise InvalidBoardConfigException(
                details=f"square {(file, rank)} is off a {spec.size}x{spec.size} board"
            )
    for a, b in combinations(sorted(spec.blocked), 2):
        if attacks(a, b):
            raise InvalidBoardConfigException(
                details=f"blocked queens {square_name(a)} and {square_name(b)} "
                "attack each other"
            )


def legal_squares(queens: Iterable[Square], size: int) -> List[Square]:
    """Squares where a new queen neither attacks nor is attacked by `queens`."""
    placed = set(queens)
    return [
        (f, r)
        for r in range(size)
        for f in range(size)
        if (f, r) not in placed and not any(attacks((f, r), q) for q in placed)
    ]


class QueensEncoder:
    """Ground relations of the queens world on an M x M board.

    Constants are `Q_b4` (queen on b4), `E_b4` (b4 empty), `R_4` (rank 4),
    `C_b` (file b), the context constant `U` and the solution constant `S`.
    """

    def __init__(self, spec: BoardSpec) -> None:
        validate_spec(spec)
        self.spec = spec
        self.size = spec.size

    @staticmethod
    def queen(square: Square) -> str:
        return f"Q_{square_name(square)}"

    @staticmethod
    def empty(square: Square) -> str:
        return f"E_{square_name(square)}"

    @staticmethod
    def rank(rank: int) -> str:
        return f"R_{rank + 1}"

    @staticmethod
    def file(file: int) -> str:
        return f"C_{ascii_lowercase[file]}"

    def squares(self) -> List[Square]:
        return [(f, r) for r in range(self.size) for f in range(self.size)]

    def constant_names(self) -> List[str]:
        squares = self.squares()
        return (
            [self.queen(s) for s in squares]
            + [self.empty(s) for s in squares]
            + [self.rank(r) for r in range(self.size)]
            + [self.file(f) for f in range(self.size)]
            + [UNIVERSE, SOLUTION]
        )

    def register(self, state: AlgebraState) -> None:
        for name in self.constant_names():
            state.ensure_constant(name)

    def attack_rules(self) -> List[RelationSpec]:
        """A queen empties every square it attacks."""
        return [
            RelationSpec.positive(self.empty(target), (UNIVERSE, self.queen(square)))
            for square in self.squares()
            for target in attacked_squares(square, self.size)
        ]

    def add_queen_rules(self) -> List[RelationSpec]:
        """A rank or a file whose other squares are all empty holds a queen."""
        rules = []
        for file, rank in self.squares():
            same_file = [self.empty((file, r)) for r in range(self.size) if r != rank]
            same_rank = [self.empty((f, rank)) for f in range(self.size) if f != file]
            for others in (same_file, same_rank):
                if others:
                    rules.append(
                        RelationSpec.positive(
                            self.queen((file, rank)), [UNIVERSE] + others
                        )
                    )
        return rules

    def line_rules(self) -> List[RelationSpec]:
        """R_x and C_y lie below every queen of their rank and file."""
        return [
            RelationSpec.positive(
                (self.rank(rank), self.file(file)), self.queen((file, rank))
            )
            for file, rank in self.squares()
        ]

    def independence_rules(self) -> List[RelationSpec]:
        """Negatives keeping every square, rank and file constant independent.

        Six families per square and one per rank and per file: 2M + 6M^2.
        """
        squares = self.squares()
        queens = [self.queen(s) for s in squares]
        empties = [self.empty(s) for s in squares]
        lines = [self.rank(r) for r in range(self.size)] + [
            self.file(f) for f in range(self.size)
        ]
        rules = []
        for i, square in enumerate(squares):
            rules.append(
                RelationSpec.negative(
                    self.queen(square), queens[:i] + queens[i + 1 :] + empties
                )
            )
            rules.append(
                RelationSpec.negative(
                    self.empty(square), empties[:i] + empties[i + 1 :] + queens
                )
            )
        for rank in range(self.size):
            others = [self.queen(s) for s in squares if s[1] != rank]
            rules.append(RelationSpec.negative(self.rank(rank), others + empties))
        for file in range(self.size):
            others = [self.queen(s) for s in squares if s[0] != file]
            rules.append(RelationSpec.negative(self.file(file), others + empties))
        for square in squares:
            rules += [
                RelationSpec.negative(self.queen(square), (UNIVERSE, self.empty(square))),
                RelationSpec.negative(self.empty(square), (UNIVERSE, self.queen(square))),
                RelationSpec.negative(self.queen(square), [UNIVERSE] + lines),
                RelationSpec.negative(self.empty(square), [UNIVERSE] + lines),
            ]
        return rules

    def rule_set(self) -> List[RelationSpec]:
        return (
            self.attack_rules()
            + self.add_queen_rules()
            + self.line_rules()
            + self.independence_rules()
        )

    def game_relations(self) -> List[RelationSpec]:
        """The relations asking for a complete board that keeps the blocked queens."""
        relations = []
        if self.spec.blocked:
            blocked = [self.queen(s) for s in sorted(self.spec.blocked)]
            relations.append(RelationSpec.positive(blocked, SOLUTION))
        everything = [self.empty(s) for s in self.squares()] + [
            self.queen(s) for s in self.squares()
        ]
        relations.append(RelationSpec.positive(SOLUTION, everything))
        for square in self.squares():
            relations.append(
                RelationSpec.negative(
                    (self.empty(square), self.queen(square)), (UNIVERSE, SOLUTION)
                )
            )
        relations += [
            RelationSpec.positive(self.rank(r), SOLUTION) for r in range(self.size)
        ]
        relations += [
            RelationSpec.positive(self.file(f), SOLUTION) for f in range(self.size)
        ]
        return relations

    def insertion(self, square: Square) -> RelationSpec:
        return RelationSpec.positive(self.queen(square), SOLUTION)


def encode_queens(spec: BoardSpec) -> List[RelationSpec]:
    encoder = QueensEncoder(spec)
    return encoder.rule_set() + encoder.game_relations()


def read_board(
    snapshot: ModelSnapshot,
    spec: BoardSpec,
    context: Sequence[str] = (SOLUTION,),
) -> List[List[SquareState]]:
    """Query `Q_xy < S` and `E_xy < S` on every square. The grid is indexed `[rank][file]`.

    Pass `context=(UNIVERSE, SOLUTION)` to read against `U ⊙ S` instead, where
    the attack rules are entailed.
    """
    encoder = QueensEncoder(spec)
    rhs = snapshot.mask_of(context)
    grid = []
    for rank in range(spec.size):
        row = []
        for file in range(spec.size):
            square = (file, rank)
            queen = snapshot.holds(snapshot.mask_of([encoder.queen(square)]), rhs)
            empty = snapshot.holds(snapshot.mask_of([encoder.empty(square)]), rhs)
            if queen and empty:
                row.append(SquareState.CONFLICT)
            elif queen:
                row.append(SquareState.QUEEN)
            elif empty:
                row.append(SquareState.EMPTY)
            else:
                row.append(SquareState.UNKNOWN)
        grid.append(row)
    return grid


def board_queens(grid: Sequence[Sequence[SquareState]]) -> List[Square]:
    return [
        (file, rank)
        for rank, row in enumerate(grid)
        for file, cell in enumerate(row)
        if cell is SquareState.QUEEN
    ]


def is_decided(grid: Sequence[Sequence[SquareState]]) -> bool:
    return all(cell is not SquareState.UNKNOWN for row in grid for cell in row)


def validate_board(grid: Sequence[Sequence[SquareState]]) -> bool:
    """Exactly one queen per rank of the board and no two queens attacking."""
    if not is_decided(grid):
        undecided = sum(cell is SquareState.UNKNOWN for row in grid for cell in row)
        raise UndecidedSquaresException(details=f"{undecided} undecided squares")
    if any(cell is SquareState.CONFLICT for row in grid for cell in row):
        return False
    queens = board_queens(grid)
    if len(queens) != len(grid):
        return False
    return not any(attacks(a, b) for a, b in combinations(queens, 2))


def render_board(grid: Sequence[Sequence[SquareState]]) -> str:
    """ASCII board, highest rank on top, files labelled below."""
    size = len(grid)
    lines = [
        f"{rank + 1:>2} " + " ".join(cell.value for cell in grid[rank])
        for rank in reversed(range(size))
    ]
    lines.append("   " + " ".join(ascii_lowercase[:size]))
    return "\n".join(lines)
