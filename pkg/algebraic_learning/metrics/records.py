import csv
from pathlib import Path
from typing import IO, List, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field

from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.inference.classifier import relation_error
from algebraic_learning.training.models import EpochReport

CSV_HEADER = ("epoch", "R", "Z", "C", "train_err", "test_err", "kappa", "seed")


class ExperimentRecord(BaseModel):
    """One epoch of a run: retained relations R, atoms Z, constants C and errors."""

    model_config = ConfigDict(frozen=True)

    epoch: int = Field(ge=0)
    retained: int = Field(ge=0)
    atoms: int = Field(ge=0)
    constants: int = Field(ge=0)
    train_error: float = Field(ge=0, le=1)
    test_error: float = Field(ge=0, le=1)
    seed: Optional[int] = None

    @property
    def kappa(self) -> Optional[float]:
        """Compression ratio R/Z, undefined without atoms."""
        return self.retained / self.atoms if self.atoms else None

    def row(self) -> List[str]:
        kappa = self.kappa
        return [
            str(self.epoch),
            str(self.retained),
            str(self.atoms),
            str(self.constants),
            repr(self.train_error),
            repr(self.test_error),
            "" if kappa is None else repr(kappa),
            "" if self.seed is None else str(self.seed),
        ]

    @classmethod
    def from_row(cls, row: dict) -> "ExperimentRecord":
        return cls(
            epoch=int(row["epoch"]),
            retained=int(row["R"]),
            atoms=int(row["Z"]),
            constants=int(row["C"]),
            train_error=float(row["train_err"]),
            test_error=float(row["test_err"]),
            seed=int(row["seed"]) if row["seed"] else None,
        )


def record_epoch(
    report: EpochReport,
    evaluation: Sequence[RelationSpec],
    seed: Optional[int] = None,
    constants: Optional[int] = None,
) -> ExperimentRecord:
    """Measure a trained epoch against an evaluation set.

    `constants` defaults to the size of the snapshot's constant table.
    """
    snapshot = report.snapshot
    return ExperimentRecord(
        epoch=report.epoch,
        retained=report.retained,
        atoms=snapshot.atom_count,
        constants=snapshot.constant_count if constants is None else constants,
        train_error=report.train_error,
        test_error=relation_error(snapshot, evaluation),
        seed=seed if seed is not None else snapshot.seed,
    )


class CsvRecordWriter:
    """Appends ExperimentRecords as CSV rows behind a single header."""

    def __init__(self, target: Union[str, Path, IO[str]]) -> None:
        if isinstance(target, (str, Path)):
            self._file = open(target, "w", encoding="utf-8", newline="")
            self._owned = True
        else:
            self._file = target
            self._owned = False
        self._writer = csv.writer(self._file, lineterminator="\n")
        self._writer.writerow(CSV_HEADER)
        self.rows = 0

    def write(self, record: ExperimentRecord) -> None:
        self._writer.writerow(record.row())
        self._file.flush()
        self.rows += 1

    def close(self) -> None:
        if self._owned:
            self._file.close()

    def __enter__(self) -> "CsvRecordWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def read_records(path: Union[str, Path]) -> List[ExperimentRecord]:
    with open(path, "r", encoding="utf-8", newline="") as file:
        return [ExperimentRecord.from_row(row) for row in csv.DictReader(file)]
