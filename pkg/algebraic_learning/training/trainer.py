import copy
import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence

from dependency_injector.wiring import Provide, inject
from pydantic import BaseModel

from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.engines.crossing_engine import CrossingEngine
from algebraic_learning.engines.reduction_engine import ReductionEngine
from algebraic_learning.engines.trace_engine import TraceEngine, split_relations
from algebraic_learning.inference.classifier import relation_error, retained_relations
from algebraic_learning.logger import get_logger
from algebraic_learning.metrics.records import ExperimentRecord, record_epoch
from algebraic_learning.training.models import (
    EpochConfig,
    EpochReport,
    ModelSnapshot,
    ProtocolConfig,
)
from algebraic_learning.training.pinning import PinningManager, PinningStructure
from algebraic_learning.training.streams import ProblemStream

logger = get_logger(__name__)

EpochCallback = Callable[[EpochReport], None]


class Trainer:
    """Runs training epochs and whole training protocols on an AlgebraState."""

    @inject
    def __init__(
        self,
        trace_engine: TraceEngine = Provide["trace_engine"],
        crossing_engine: CrossingEngine = Provide["crossing_engine"],
        reduction_engine: ReductionEngine = Provide["reduction_engine"],
        pinning_manager: PinningManager = Provide["pinning_manager"],
    ) -> None:
        self._trace_engine = trace_engine
        self._crossing_engine = crossing_engine
        self._reduction_engine = reduction_engine
        self._pinning_manager = pinning_manager

    @classmethod
    def standalone(cls) -> "Trainer":
        """A trainer with default engines, for use outside the container."""
        trace_engine = TraceEngine()
        return cls(
            trace_engine=trace_engine,
            crossing_engine=CrossingEngine(trace_engine),
            reduction_engine=ReductionEngine(trace_engine),
            pinning_manager=PinningManager(),
        )

    def train_epoch(
        self, state: AlgebraState, config: EpochConfig, pinning: PinningStructure
    ) -> ModelSnapshot:
        """Embed one batch, keeping the pinning entries that still fit the data.

        The dual starts fresh every epoch: the batch and the holding pinning
        relations get new dual atoms, the dual is reduced, trace constraints
        are enforced and the positives are sparse-crossed. Terms created for
        the epoch are retired before the snapshot is taken.
        """
        trace_engine = self._trace_engine
        if config.max_trace_iterations is not None:
            trace_engine = TraceEngine(config.max_trace_iterations)

        batch = [state.bind(spec) for spec in config.batch]
        state.reset_dual()
        pinning_relations, discarded = self._pinning_manager.filter_pinning(
            state, batch, pinning, trace_engine, config.max_pinning_enforced
        )
        positives, negatives = split_relations(batch)
        negatives += pinning_relations
        self._reduction_engine.reduce_dual(state, negatives)
        trace_engine.enforce_all(state, positives + negatives, preprocess=False)
        self._crossing_engine.enforce_positive_relations(state, positives)

        if config.epoch % config.reduce_every == 0:
            self._reduction_engine.reduce_master(state)
        if config.eliminate_redundant:
            self._reduction_engine.eliminate_redundant_atoms(state)
        added = self._pinning_manager.generate_pinning(state, pinning, config.epoch)

        failing = [spec for spec, r in zip(config.batch, batch) if not state.holds(r)]
        if failing:
            logger.warning(f"{len(failing)} batch relations do not hold: {failing[:3]}")
        for term in state.terms():
            state.retire_term(term)

        snapshot = ModelSnapshot.from_state(state, pinning.entries, config.epoch)
        logger.info(
            f"Epoch {config.epoch}: {len(positives)}+{len(batch) - len(positives)} "
            f"relations, {snapshot.atom_count} atoms, {len(pinning)} pinning entries "
            f"(+{len(added)}, -{len(discarded)})"
        )
        return snapshot

    def fit(
        self,
        stream: ProblemStream,
        protocol: ProtocolConfig,
        seed: Optional[int] = 0,
        evaluation: Optional[Sequence[RelationSpec]] = None,
        on_epoch: Optional[EpochCallback] = None,
    ) -> List[ModelSnapshot]:
        """Train on batches of `stream` until the protocol stops.

        Returns the last `protocol.keep_snapshots` snapshots, oldest first.
        """
        logger.info(f"Training with seed {seed}, protocol {protocol.kind}")
        state = AlgebraState(seed)
        stream.register(state)
        pinning = PinningStructure()
        snapshots = deque(maxlen=protocol.keep_snapshots)
        seen: Dict[RelationSpec, None] = {}
        positives, negatives = protocol.positives, protocol.negatives
        previous_accuracy: Optional[float] = None
        previous_test_error: Optional[float] = None
        zero_streak = 0

        for epoch in range(1, protocol.max_epochs + 1):
            batch = stream.next_batch(positives, negatives)
            before = ModelSnapshot.from_state(state, epoch=epoch - 1)
            pre_batch_error = relation_error(before, batch)
            snapshot = self.train_epoch(
                state,
                EpochConfig(
                    batch=batch,
                    epoch=epoch,
                    reduce_every=protocol.reduce_every,
                    eliminate_redundant=protocol.eliminate_redundant,
                    max_pinning_enforced=protocol.max_pinning_enforced,
                ),
                pinning,
            )
            snapshots.append(snapshot)
            seen.update(dict.fromkeys(batch))
            if on_epoch is not None:
                on_epoch(
                    EpochReport(
                        epoch=epoch,
                        snapshot=snapshot,
                        positives=positives,
                        negatives=negatives,
                        pre_batch_error=pre_batch_error,
                        train_error=relation_error(snapshot, batch),
                        retained=retained_relations(snapshot, seen),
                        pinning_entries=len(pinning),
                    )
                )

            if protocol.kind == "stagnation":
                accuracy = 1 - pre_batch_error
                if previous_accuracy is not None and accuracy <= previous_accuracy:
                    positives = min(protocol.cap, math.ceil(positives * (1 + protocol.growth)))
                    negatives = min(protocol.cap, math.ceil(negatives * (1 + protocol.growth)))
                previous_accuracy = accuracy
            elif protocol.kind == "error-direction":
                test_error = (
                    relation_error(snapshot, evaluation) if evaluation else pre_batch_error
                )
                if previous_test_error is not None and test_error != previous_test_error:
                    if test_error > previous_test_error:
                        factor = 1 + protocol.step
                    else:
                        factor = 1 - protocol.step
                    positives = min(protocol.cap, max(1, round(positives * factor)))
                    negatives = min(protocol.cap, max(1, round(negatives * factor)))
                previous_test_error = test_error

            zero_streak = zero_streak + 1 if pre_batch_error == 0 else 0
            limit = protocol.stop_after_zero_error
            if limit and zero_streak >= limit:
                logger.info(f"Stopping after {zero_streak} epochs without batch errors")
                break
        return list(snapshots)

    def fit_replicas(
        self,
        stream: ProblemStream,
        protocol: ProtocolConfig,
        seeds: Sequence[Optional[int]],
        workers: int = 1,
        evaluation: Optional[Sequence[RelationSpec]] = None,
        constants: Optional[int] = None,
    ) -> List["ReplicaResult"]:
        """Train one independent algebra per seed on copies of the same stream.

        Every replica records an ExperimentRecord per epoch. With more than
        one worker the replicas run in separate processes.
        """
        jobs = [(stream, protocol, seed, evaluation, constants) for seed in seeds]
        if workers <= 1 or len(seeds) <= 1:
            return [_fit_replica(self, *job) for job in jobs]
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(_fit_replica, None, *job) for job in jobs]
            return [future.result() for future in futures]


class ReplicaResult(BaseModel):
    seed: Optional[int]
    snapshots: List[ModelSnapshot]
    records: List[ExperimentRecord]


def _fit_replica(
    trainer: Optional[Trainer],
    stream: ProblemStream,
    protocol: ProtocolConfig,
    seed: Optional[int],
    evaluation: Optional[Sequence[RelationSpec]],
    constants: Optional[int],
) -> ReplicaResult:
    trainer = trainer or Trainer.standalone()
    evaluation = list(evaluation or [])
    records: List[ExperimentRecord] = []
    snapshots = trainer.fit(
        copy.deepcopy(stream),
        protocol,
        seed=seed,
        evaluation=evaluation,
        on_epoch=lambda report: records.append(
            record_epoch(report, evaluation, seed, constants)
        ),
    )
    return ReplicaResult(seed=seed, snapshots=snapshots, records=records)
