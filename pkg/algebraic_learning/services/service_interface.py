"""Service layer interface.

Defines the contract that concrete service implementations (e.g. `LearningService`)
must fulfill. This abstraction allows easier testing (mocking) of the command
line front-end and alternative implementations.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import List, Optional, Sequence

from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.problems.images import ImageEncoder, LabeledExample
from algebraic_learning.problems.queens import BoardSpec
from algebraic_learning.training.models import ModelSnapshot, ProtocolConfig
from algebraic_learning.training.queens_protocol import EpochBoardReport
from algebraic_learning.training.streams import ProblemStream
from algebraic_learning.training.trainer import ReplicaResult


class ServiceInterface(ABC):
    """Abstract interface for learning operations.

    Every method that writes files does so through the command invoker, so a
    failing run can take back the outputs it already produced.
    """

    @abstractmethod
    def train(
        self,
        stream: ProblemStream,
        protocol: ProtocolConfig,
        seed: Optional[int] = 0,
        replicas: int = 1,
        workers: int = 1,
        evaluation: Optional[Sequence[RelationSpec]] = None,
        constants: Optional[int] = None,
        out_path: Optional[Path] = None,
        csv_path: Optional[Path] = None,
        snapshots_dir: Optional[Path] = None,
    ) -> List[ReplicaResult]:
        """Train one or more replicas and persist what was asked for.

        Parameters:
            stream (ProblemStream): Source of the training batches.
            protocol (ProtocolConfig): Batch sizing and stop conditions.
            seed (Optional[int]): Seed of the first replica; replica i uses seed + i.
            replicas (int): Number of independent algebras.
            workers (int): Processes used to run the replicas.
            evaluation (Optional[Sequence[RelationSpec]]): Relations used for the
                test error of the records.
            constants (Optional[int]): Constant count C written in the records.
            out_path (Optional[Path]): Where the final snapshot of the first
                replica is written.
            csv_path (Optional[Path]): Where the experiment records are written.
            snapshots_dir (Optional[Path]): Directory receiving every retained
                snapshot of every replica.
        """
        raise NotImplementedError

    @abstractmethod
    def evaluate(
        self,
        snapshots: Sequence[ModelSnapshot],
        examples: Sequence[LabeledExample],
        encoder: ImageEncoder,
        threshold: Optional[int] = None,
        cutoff: Optional[int] = None,
        max_cutoff: Optional[int] = None,
    ) -> dict:
        """Classification reports of snapshots on labelled images.

        The last snapshot is always evaluated alone. With a threshold the
        snapshots also vote, with a cutoff the last snapshot's pinning is used
        for misses classification and with max_cutoff the best cutoff is
        searched first.
        """
        raise NotImplementedError

    @abstractmethod
    def run_queens(
        self,
        spec: BoardSpec,
        schedule: str,
        seed: Optional[int] = 0,
        stop_on_solution: bool = True,
    ) -> List[EpochBoardReport]:
        """Run the queens protocol and show the board of every epoch."""
        raise NotImplementedError

    @abstractmethod
    def exact_oracle(self, rows: int, cols: int) -> dict:
        """Build the exact vertical-bar model and compare it with the bar predicate on every image."""
        raise NotImplementedError

    @abstractmethod
    def generate_data(self, relations: Sequence[RelationSpec], path: Path) -> Path:
        """Write relations in the text format."""
        raise NotImplementedError

    @abstractmethod
    def load_snapshots(self, paths: Sequence[Path]) -> List[ModelSnapshot]:
        raise NotImplementedError
