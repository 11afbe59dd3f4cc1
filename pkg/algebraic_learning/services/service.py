import io
from pathlib import Path
from typing import List, Optional, Sequence

from dependency_injector.wiring import Provide, inject

from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.inference.classifier import (
    QueryTerm,
    best_misses_cutoff,
    classification_report,
    contains,
    misses_classify,
    vote,
)
from algebraic_learning.logger import get_logger
from algebraic_learning.metrics.records import CsvRecordWriter
from algebraic_learning.problems.exact import exact_vertical_bar_atomization
from algebraic_learning.problems.images import (
    BarLabeler,
    ImageEncoder,
    LabeledExample,
    all_images,
)
from algebraic_learning.problems.queens import BoardSpec, render_board
from algebraic_learning.problems.relation_dsl import format_relations
from algebraic_learning.processing.visualizer_interface import VisualizerInterface
from algebraic_learning.services.command import CommandInvoker
from algebraic_learning.services.service_interface import ServiceInterface
from algebraic_learning.services.write_file_command import WriteFileCommand
from algebraic_learning.training.models import ModelSnapshot, ProtocolConfig
from algebraic_learning.training.queens_protocol import EpochBoardReport, QueensProtocol
from algebraic_learning.training.snapshot_conversor import SnapshotConversor
from algebraic_learning.training.streams import ProblemStream
from algebraic_learning.training.trainer import ReplicaResult, Trainer

logger = get_logger(__name__)

EXHAUSTIVE_PIXEL_LIMIT = 16


class LearningService(ServiceInterface):
    @inject
    def __init__(
        self,
        trainer: Trainer = Provide["trainer"],
        conversor: SnapshotConversor = Provide["conversor"],
        visualizer: VisualizerInterface = Provide["visualizer"],
        command_invoker: CommandInvoker = Provide["command_invoker"],
    ) -> None:
        self._trainer = trainer
        self._conversor = conversor
        self._visualizer = visualizer
        self._command_invoker = command_invoker

    def _write(self, path: Path, content: str) -> Path:
        self._command_invoker.set_command(WriteFileCommand(path, content))
        return self._command_invoker.execute_command()

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
        seeds = [None if seed is None else seed + i for i in range(replicas)]
        logger.info(f"Training {replicas} replica(s) with seeds {seeds}")
        results = self._trainer.fit_replicas(
            stream, protocol, seeds, workers, evaluation, constants
        )

        mark = self._command_invoker.mark()
        try:
            if csv_path is not None:
                buffer = io.StringIO()
                writer = CsvRecordWriter(buffer)
                for result in results:
                    for record in result.records:
                        writer.write(record)
                self._write(Path(csv_path), buffer.getvalue())
            if out_path is not None and results[0].snapshots:
                self._write(
                    Path(out_path), self._conversor.dumps(results[0].snapshots[-1]) + "\n"
                )
            if snapshots_dir is not None:
                for index, result in enumerate(results):
                    for snapshot in result.snapshots:
                        name = f"replica{index}_epoch{snapshot.epoch}.json"
                        self._write(
                            Path(snapshots_dir) / name,
                            self._conversor.dumps(snapshot) + "\n",
                        )
        except OSError:
            logger.error("Writing the training outputs failed, removing partial outputs")
            self._command_invoker.undo_to(mark)
            raise

        summary = {
            "seeds": seeds,
            "epochs": [len(r.records) for r in results],
            "atoms": [r.snapshots[-1].atom_count if r.snapshots else 0 for r in results],
        }
        if results and results[0].records:
            last = results[0].records[-1]
            summary["train_error"] = last.train_error
            summary["test_error"] = last.test_error
        self._visualizer.print_json_data(summary)
        return results

    def evaluate(
        self,
        snapshots: Sequence[ModelSnapshot],
        examples: Sequence[LabeledExample],
        encoder: ImageEncoder,
        threshold: Optional[int] = None,
        cutoff: Optional[int] = None,
        max_cutoff: Optional[int] = None,
    ) -> dict:
        if not snapshots:
            raise ValueError("No snapshots to evaluate")
        model = snapshots[-1]
        v = encoder.class_constant
        queries = [QueryTerm.from_names(model, encoder.term_names(e.image)) for e in examples]
        labels = [e.label for e in examples]

        single = [contains(model, v, q) for q in queries]
        results = {"single": classification_report(single, labels).summary()}
        if threshold is not None:
            votes = [vote(snapshots, v, q, threshold) for q in queries]
            report = classification_report([r.decision for r in votes], labels, votes)
            results["vote"] = {"threshold": threshold, **report.summary()}
        if max_cutoff is not None:
            cutoff, _ = best_misses_cutoff(model, v, list(zip(queries, labels)), max_cutoff)
        if cutoff is not None:
            predictions = [misses_classify(model, v, q, cutoff) for q in queries]
            results["misses"] = {
                "cutoff": cutoff,
                **classification_report(predictions, labels).summary(),
            }
        self._visualizer.print_json_data(results)
        return results

    def run_queens(
        self,
        spec: BoardSpec,
        schedule: str,
        seed: Optional[int] = 0,
        stop_on_solution: bool = True,
    ) -> List[EpochBoardReport]:
        def show(report: EpochBoardReport) -> None:
            title = f"epoch {report.epoch} {report.kind}"
            if report.inserted:
                title += f" {report.inserted}"
            self._visualizer.print_board(render_board(report.board).splitlines(), title)

        return QueensProtocol(self._trainer).run(
            spec,
            schedule,
            seed=seed,
            stop_on_solution=stop_on_solution,
            on_epoch=show,
        )

    def exact_oracle(self, rows: int, cols: int) -> dict:
        snapshot = exact_vertical_bar_atomization(rows, cols)
        encoder = ImageEncoder(width=cols, height=rows)
        checked = mismatches = 0
        images = all_images(cols, rows)
        if rows * cols > EXHAUSTIVE_PIXEL_LIMIT:
            logger.warning(f"{rows}x{cols} has too many images to check, only the model is built")
            images = ()
        for image in images:
            query = QueryTerm.from_names(snapshot, encoder.term_names(image))
            expected = BarLabeler.HAS_VERTICAL_BAR.label(image)
            mismatches += contains(snapshot, encoder.class_constant, query) != expected
            checked += 1
        result = {
            "rows": rows,
            "cols": cols,
            "atoms": snapshot.atom_count,
            "images": checked,
            "mismatches": mismatches,
        }
        self._visualizer.print_json_data(result)
        return result

    def generate_data(self, relations: Sequence[RelationSpec], path: Path) -> Path:
        written = self._write(Path(path), format_relations(relations))
        logger.info(f"Wrote {len(relations)} relations to {written}")
        return written

    def load_snapshots(self, paths: Sequence[Path]) -> List[ModelSnapshot]:
        return [self._conversor.load(path) for path in paths]
