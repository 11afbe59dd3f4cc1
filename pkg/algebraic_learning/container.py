from dependency_injector import containers, providers

from algebraic_learning.engines.crossing_engine import CrossingEngine
from algebraic_learning.engines.reduction_engine import ReductionEngine
from algebraic_learning.engines.trace_engine import TraceEngine
from algebraic_learning.logger import init_log_level
from algebraic_learning.processing.console_visualizer import ConsoleVisualizer
from algebraic_learning.services.command import CommandInvoker
from algebraic_learning.services.service import LearningService
from algebraic_learning.training.pinning import PinningManager
from algebraic_learning.training.snapshot_conversor import SnapshotConversor
from algebraic_learning.training.trainer import Trainer


class Container(containers.DeclarativeContainer):
    """Dependency injection container for the algebraic learning library."""

    wiring_config = containers.WiringConfiguration(
        packages=[
            "algebraic_learning",
        ]
    )

    _log_level = providers.Resource(init_log_level)

    trace_engine = providers.Singleton(TraceEngine)
    crossing_engine = providers.Singleton(CrossingEngine, trace_engine=trace_engine)
    reduction_engine = providers.Singleton(ReductionEngine, trace_engine=trace_engine)
    pinning_manager = providers.Singleton(PinningManager)
    trainer = providers.Singleton(
        Trainer,
        trace_engine=trace_engine,
        crossing_engine=crossing_engine,
        reduction_engine=reduction_engine,
        pinning_manager=pinning_manager,
    )
    conversor = providers.Singleton(SnapshotConversor)
    visualizer = providers.Singleton(ConsoleVisualizer)
    command_invoker = providers.Singleton(CommandInvoker)

    service = providers.Factory(
        LearningService,
        trainer=trainer,
        conversor=conversor,
        visualizer=visualizer,
        command_invoker=command_invoker,
    )
