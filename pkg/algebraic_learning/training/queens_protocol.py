from typing import Callable, List, Literal, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict

from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.exceptions.learning_exceptions import (
    InconsistentTrainingSetException,
)
from algebraic_learning.logger import get_logger
from algebraic_learning.problems.queens import (
    SOLUTION,
    BoardSpec,
    QueensEncoder,
    SquareState,
    board_queens,
    is_decided,
    legal_squares,
    read_board,
    square_name,
    validate_board,
)
from algebraic_learning.training.models import EpochConfig
from algebraic_learning.training.pinning import PinningStructure
from algebraic_learning.training.trainer import Trainer

logger = get_logger(__name__)

EpochKind = Literal["play", "idle", "insert"]
EPOCH_KINDS = ("play", "idle", "insert")


class EpochBoardReport(BaseModel):
    """The board read after one epoch of a queens run."""

    model_config = ConfigDict(frozen=True)

    epoch: int
    kind: EpochKind
    inserted: Optional[str] = None
    board: List[List[SquareState]]
    queens: int
    decided: bool
    solved: bool
    atoms: int


def parse_schedule(schedule: Union[str, Sequence[str]]) -> List[str]:
    """Expand `play:1,insert:17,idle:3` into one epoch kind per epoch."""
    if not isinstance(schedule, str):
        kinds = list(schedule)
        unknown = [k for k in kinds if k not in EPOCH_KINDS]
        if unknown:
            raise ValueError(f"unknown epoch kinds {unknown}")
        return kinds
    kinds = []
    for item in schedule.split(","):
        item = item.strip()
        if not item:
            continue
        kind, _, count = item.partition(":")
        kind = kind.strip()
        if kind not in EPOCH_KINDS:
            raise ValueError(f"unknown epoch kind {kind!r} in schedule {schedule!r}")
        repeat = int(count) if count.strip() else 1
        if repeat < 0:
            raise ValueError(f"negative count in schedule item {item!r}")
        kinds += [kind] * repeat
    return kinds


class QueensProtocol:
    """Learns a completion of a queens board by epochs of the queens rule set.

    `play` epochs train the rule set with the game relations, `insert` epochs
    add `Q < S` for one random legal square for that epoch only and `idle`
    epochs train the rule set alone.
    """

    def __init__(self, trainer: Trainer) -> None:
        self._trainer = trainer

    def run(
        self,
        spec: BoardSpec,
        schedule: Union[str, Sequence[str]],
        seed: Optional[int] = 0,
        state: Optional[AlgebraState] = None,
        stop_on_solution: bool = True,
        on_epoch: Optional[Callable[[EpochBoardReport], None]] = None,
        context: Sequence[str] = (SOLUTION,),
    ) -> List[EpochBoardReport]:
        encoder = QueensEncoder(spec)
        kinds = parse_schedule(schedule)
        state = state if state is not None else AlgebraState(seed)
        encoder.register(state)
        rules = encoder.rule_set()
        game = encoder.game_relations()
        pinning = PinningStructure()
        logger.info(
            f"Queens {spec.size}x{spec.size}, blocked "
            f"{sorted(square_name(s) for s in spec.blocked)}, seed {state.seed}, "
            f"{len(kinds)} epochs"
        )

        queens = sorted(spec.blocked)
        reports = []
        for epoch, kind in enumerate(kinds, start=1):
            batch = list(rules) if kind == "idle" else rules + game
            inserted = None
            if kind == "insert":
                legal = legal_squares(queens, spec.size)
                if legal:
                    square = legal[int(state.rng.integers(len(legal)))]
                    inserted = square_name(square)
                    batch.append(encoder.insertion(square))
            try:
                snapshot = self._trainer.train_epoch(
                    state, EpochConfig(batch=batch, epoch=epoch), pinning
                )
            except InconsistentTrainingSetException:
                if inserted is None:
                    raise
                logger.warning(
                    f"Queen on {inserted} has no completion, "
                    f"epoch {epoch} plays without it"
                )
                inserted = None
                snapshot = self._trainer.train_epoch(
                    state, EpochConfig(batch=rules + game, epoch=epoch), pinning
                )
            board = read_board(snapshot, spec, context)
            queens = sorted(set(board_queens(board)) | spec.blocked)
            decided = is_decided(board)
            report = EpochBoardReport(
                epoch=epoch,
                kind=kind,
                inserted=inserted,
                board=board,
                queens=len(board_queens(board)),
                decided=decided,
                solved=decided and validate_board(board),
                atoms=snapshot.atom_count,
            )
            reports.append(report)
            if on_epoch is not None:
                on_epoch(report)
            if report.solved:
                logger.info(f"Complete board found at epoch {epoch}")
                if stop_on_solution:
                    break
        return reports
