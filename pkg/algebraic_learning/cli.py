"""Command-line front-end of the `algebraic-learning` console script.

Every subcommand builds a validated RunConfig from its flags and an optional
`--config` file of `key=value` lines, flags winning over the file. Exit codes
are 0 on success, 1 on usage errors and 2 on data or consistency errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from dependency_injector.wiring import Provide, inject
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from algebraic_learning.config import Config, EnvironmentVariables
from algebraic_learning.exceptions.algebra_exceptions import AlgebraException
from algebraic_learning.exceptions.learning_exceptions import LearningException
from algebraic_learning.exceptions.problem_exceptions import ProblemException
from algebraic_learning.logger import get_logger, set_package_log_level
from algebraic_learning.metrics.theory import (
    predicted_error,
    predicted_error_symmetric,
    symmetric_constant,
)
from algebraic_learning.problems.exact import required_atom_count
from algebraic_learning.problems.idx import load_idx
from algebraic_learning.problems.images import (
    BarLabeler,
    ImageEncoder,
    LabeledExample,
    exhaustive_dataset,
    gen_bar_images,
)
from algebraic_learning.problems.queens import BoardSpec, encode_queens
from algebraic_learning.problems.relation_dsl import load_relations
from algebraic_learning.processing.visualizer_interface import VisualizerInterface
from algebraic_learning.services.service_interface import ServiceInterface
from algebraic_learning.training.models import ProtocolConfig
from algebraic_learning.training.queens_protocol import parse_schedule
from algebraic_learning.training.streams import (
    BarImageStream,
    DatasetStream,
    ExhaustiveStream,
    ProblemStream,
    RelationStream,
)

logger = get_logger(__name__)

EVAL_SEED_OFFSET = 1_000_003
LABELERS = {
    "bars": BarLabeler.HAS_VERTICAL_BAR,
    "parity": BarLabeler.PARITY_OF_BARS,
}


class UsageError(Exception):
    """Bad command line or configuration file."""


class RunConfig(BaseModel):
    """Parameters of one command, from flags and the configuration file."""

    model_config = ConfigDict(extra="forbid")

    command: Literal["train", "eval", "queens", "exact-oracle", "gen-data", "theory"]
    seed: Union[int, Literal["random"]] = Field(
        default_factory=lambda: Config.get_int(EnvironmentVariables.ALGEBRA_DEFAULT_SEED, 0)
    )
    log_level: Optional[str] = None

    problem: Literal["bars", "parity", "idx", "relations", "queens"] = "bars"
    dims: str = Field(default="2x2", pattern=r"^[1-9]\d*x[1-9]\d*$")
    noise: float = Field(default=0.0, ge=0, lt=1)
    exhaustive: bool = False
    count: int = Field(default=100, ge=1)
    eval_size: int = Field(default=0, ge=0)
    images: Optional[Path] = None
    labels: Optional[Path] = None
    test_images: Optional[Path] = None
    test_labels: Optional[Path] = None
    digit: Optional[int] = Field(default=None, ge=0, le=9)
    pixel_threshold: int = Field(default=128, ge=0, le=255)
    relations: Optional[Path] = None

    protocol: Literal["fixed", "stagnation", "error-direction"] = "fixed"
    epochs: int = Field(default=10, ge=1)
    positives: int = Field(default=100, ge=1)
    negatives: int = Field(default=100, ge=1)
    stop_after_zero_error: Optional[int] = Field(default=None, ge=1)
    keep_snapshots: int = Field(default=10, ge=1)
    reduce_every: int = Field(default=1, ge=1)
    eliminate_redundant: bool = False
    replicas: int = Field(default=1, ge=1)
    workers: int = Field(default=1, ge=1)

    out: Optional[Path] = None
    csv: Optional[Path] = None
    snapshots_dir: Optional[Path] = None
    snapshots: List[Path] = Field(default_factory=list)
    vote_threshold: Optional[int] = Field(default=None, ge=0)
    cutoff: Optional[int] = Field(default=None, ge=0)
    max_cutoff: Optional[int] = Field(default=None, ge=0)

    size: int = Field(default=8, ge=1, le=26)
    blocked: List[str] = Field(default_factory=list)
    schedule: str = "play:1,insert:40"
    keep_going: bool = False

    pred_error: bool = False
    required_atoms: bool = False
    constants: Optional[int] = Field(default=None, ge=0)
    d: Optional[int] = Field(default=None, ge=1)
    kappa: Optional[float] = Field(default=None, gt=0)
    bar_length: Optional[int] = Field(default=None, ge=1)
    target_fpr: Optional[float] = Field(default=None, gt=0)

    @field_validator("blocked", "snapshots", mode="before")
    @classmethod
    def split_lists(cls, value):
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value

    @field_validator("schedule")
    @classmethod
    def known_schedule(cls, value: str) -> str:
        parse_schedule(value)
        return value

    @field_validator("log_level")
    @classmethod
    def known_level(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return value
        value = value.upper()
        if not isinstance(logging.getLevelName(value), int):
            raise ValueError(f"unknown log level {value}")
        return value

    @property
    def rows(self) -> int:
        return int(self.dims.split("x")[0])

    @property
    def cols(self) -> int:
        return int(self.dims.split("x")[1])

    def effective_seed(self) -> int:
        if self.seed == "random":
            return int(np.random.SeedSequence().entropy % 2**32)
        return self.seed


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _add_image_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--problem", choices=["bars", "parity", "idx", "relations"])
    parser.add_argument("--dims", help="image grid as ROWSxCOLS")
    parser.add_argument("--noise", type=float)
    parser.add_argument("--exhaustive", action="store_true")
    parser.add_argument("--eval-size", type=int, help="held-out bar images")
    parser.add_argument("--test-images", type=Path)
    parser.add_argument("--test-labels", type=Path)
    parser.add_argument("--digit", type=int, help="positive digit of IDX data")
    parser.add_argument("--pixel-threshold", type=int)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", type=Path, help="file of key=value lines")
    common.add_argument("--seed", help="integer seed or `random`")
    common.add_argument("--log-level")

    parser = _Parser(
        prog="algebraic-learning",
        description="Algebraic learning over atomized semilattices.",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        return commands.add_parser(
            name, parents=[common], help=help_text, argument_default=argparse.SUPPRESS
        )

    train = command("train", "train replicas and write snapshots and records")
    _add_image_options(train)
    train.add_argument("--images", type=Path)
    train.add_argument("--labels", type=Path)
    train.add_argument("--relations", type=Path, help="relation file for --problem relations")
    train.add_argument("--protocol", choices=["fixed", "stagnation", "error-direction"])
    train.add_argument("--epochs", type=int)
    train.add_argument("--positives", type=int)
    train.add_argument("--negatives", type=int)
    train.add_argument("--stop-after-zero-error", type=int)
    train.add_argument("--keep-snapshots", type=int)
    train.add_argument("--reduce-every", type=int)
    train.add_argument("--eliminate-redundant", action="store_true")
    train.add_argument("--replicas", type=int)
    train.add_argument("--workers", type=int)
    train.add_argument("--out", type=Path)
    train.add_argument("--csv", type=Path)
    train.add_argument("--snapshots-dir", type=Path)

    evaluate = command("eval", "classify labelled images with snapshots")
    _add_image_options(evaluate)
    evaluate.add_argument("--snapshots", nargs="+", type=Path)
    evaluate.add_argument("--vote-threshold", type=int)
    evaluate.add_argument("--cutoff", type=int)
    evaluate.add_argument("--max-cutoff", type=int)

    queens = command("queens", "complete a queens board")
    queens.add_argument("--size", type=int)
    queens.add_argument("--blocked", nargs="*", help="squares such as b4")
    queens.add_argument("--schedule", help="e.g. play:1,insert:40,idle:3")
    queens.add_argument("--keep-going", action="store_true")

    oracle = command("exact-oracle", "check the exact vertical-bar model")
    oracle.add_argument("--dims", help="image grid as ROWSxCOLS")

    data = command("gen-data", "write a relation file")
    data.add_argument("--problem", choices=["bars", "parity", "queens"])
    data.add_argument("--dims", help="image grid as ROWSxCOLS")
    data.add_argument("--noise", type=float)
    data.add_argument("--count", type=int)
    data.add_argument("--size", type=int)
    data.add_argument("--blocked", nargs="*")
    data.add_argument("--out", type=Path)

    theory = command("theory", "closed-form predictions")
    theory.add_argument("--pred-error", action="store_true")
    theory.add_argument("--constants", type=int)
    theory.add_argument("--d", type=int)
    theory.add_argument("--kappa", type=float)
    theory.add_argument("--required-atoms", action="store_true")
    theory.add_argument("--noise", type=float)
    theory.add_argument("--bar-length", type=int)
    theory.add_argument("--target-fpr", type=float)
    return parser


def read_config_file(path: Path) -> Dict[str, str]:
    """`key=value` lines; keys use flag names with dashes or underscores."""
    values = {}
    for number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{number}: expected key=value, got {line!r}")
        key = key.strip().replace("-", "_")
        if key in ("command", "config"):
            raise UsageError(f"{path}:{number}: {key} cannot be set in a configuration file")
        values[key] = value.strip()
    return values


def parse_run_config(argv: Sequence[str]) -> RunConfig:
    flags = vars(build_parser().parse_args(argv))
    config_path = flags.pop("config", None)
    values = read_config_file(config_path) if config_path is not None else {}
    values.update(flags)
    return RunConfig(**values)


def _announce_seed(seed: int) -> None:
    logger.info(f"Effective seed {seed}")
    print(f"seed: {seed}")


def _image_examples(
    config: RunConfig, seed: int, images: Optional[Path], labels: Optional[Path], size: int
) -> List[LabeledExample]:
    if config.problem == "idx":
        if images is None or labels is None:
            raise UsageError("IDX data needs both an image and a label file")
        return load_idx(images, labels, config.pixel_threshold, config.digit)
    labeler = LABELERS[config.problem]
    if config.exhaustive:
        return exhaustive_dataset(config.cols, config.rows, labeler)
    if size:
        return gen_bar_images(config.cols, config.rows, config.noise, labeler, size, seed)
    return []


def _train_stream(config: RunConfig, seed: int) -> Tuple[ProblemStream, list, Optional[int]]:
    """The stream, the evaluation relations and the constant count of the records."""
    if config.problem == "relations":
        if config.relations is None:
            raise UsageError("--problem relations needs --relations")
        relations = load_relations(config.relations)
        return RelationStream(relations), relations, None
    if config.problem == "idx":
        examples = _image_examples(config, seed, config.images, config.labels, 0)
        stream = DatasetStream(examples, seed=seed)
        held_out = (
            _image_examples(config, seed, config.test_images, config.test_labels, 0)
            if config.test_images is not None
            else []
        )
    elif config.exhaustive:
        stream = ExhaustiveStream(config.cols, config.rows, LABELERS[config.problem])
        held_out = _image_examples(config, seed, None, None, 0)
    else:
        stream = BarImageStream(
            config.cols, config.rows, config.noise, LABELERS[config.problem], seed
        )
        held_out = _image_examples(
            config, seed + EVAL_SEED_OFFSET, None, None, config.eval_size
        )
    encoder = stream.encoder
    return stream, encoder.encode_all(held_out), encoder.pixel_constant_count


def _train(config: RunConfig, service: ServiceInterface) -> int:
    if config.problem == "queens":
        raise UsageError("use the queens command for queens boards")
    seed = config.effective_seed()
    _announce_seed(seed)
    stream, evaluation, constants = _train_stream(config, seed)
    protocol = ProtocolConfig(
        kind=config.protocol,
        positives=config.positives,
        negatives=config.negatives,
        max_epochs=config.epochs,
        stop_after_zero_error=config.stop_after_zero_error,
        keep_snapshots=config.keep_snapshots,
        reduce_every=config.reduce_every,
        eliminate_redundant=config.eliminate_redundant,
    )
    service.train(
        stream,
        protocol,
        seed=seed,
        replicas=config.replicas,
        workers=config.workers,
        evaluation=evaluation,
        constants=constants,
        out_path=config.out,
        csv_path=config.csv,
        snapshots_dir=config.snapshots_dir,
    )
    return 0


def _evaluate(config: RunConfig, service: ServiceInterface) -> int:
    if not config.snapshots:
        raise UsageError("eval needs --snapshots")
    if config.problem not in ("bars", "parity", "idx"):
        raise UsageError("eval classifies images: use --problem bars, parity or idx")
    seed = config.effective_seed()
    if config.problem != "idx" and not config.exhaustive:
        _announce_seed(seed)
    examples = _image_examples(
        config, seed, config.test_images, config.test_labels, config.eval_size or config.count
    )
    if not examples:
        raise UsageError("no evaluation images")
    first = examples[0].image
    snapshots = service.load_snapshots(config.snapshots)
    service.evaluate(
        snapshots,
        examples,
        ImageEncoder(first.width, first.height),
        threshold=config.vote_threshold,
        cutoff=config.cutoff,
        max_cutoff=config.max_cutoff,
    )
    return 0


def _queens(
    config: RunConfig, service: ServiceInterface, visualizer: VisualizerInterface
) -> int:
    seed = config.effective_seed()
    _announce_seed(seed)
    spec = BoardSpec.parse(config.size, config.blocked)
    reports = service.run_queens(
        spec, config.schedule, seed=seed, stop_on_solution=not config.keep_going
    )
    last = reports[-1] if reports else None
    visualizer.print_json_data(
        {
            "seed": seed,
            "epochs": len(reports),
            "solved": any(r.solved for r in reports),
            "queens": last.queens if last else 0,
            "atoms": last.atoms if last else 0,
        }
    )
    return 0


def _exact_oracle(config: RunConfig, service: ServiceInterface) -> int:
    result = service.exact_oracle(config.rows, config.cols)
    return 2 if result["mismatches"] else 0


def _gen_data(config: RunConfig, service: ServiceInterface) -> int:
    if config.out is None:
        raise UsageError("gen-data needs --out")
    if config.problem == "queens":
        relations = encode_queens(BoardSpec.parse(config.size, config.blocked))
    elif config.problem in LABELERS:
        seed = config.effective_seed()
        _announce_seed(seed)
        encoder = ImageEncoder(config.cols, config.rows)
        examples = gen_bar_images(
            config.cols,
            config.rows,
            config.noise,
            LABELERS[config.problem],
            config.count,
            seed,
        )
        relations = encoder.encode_all(examples)
    else:
        raise UsageError(f"gen-data cannot generate {config.problem} data")
    service.generate_data(relations, config.out)
    return 0


def _theory(config: RunConfig, visualizer: VisualizerInterface) -> int:
    if not (config.pred_error or config.required_atoms):
        raise UsageError("theory needs --pred-error or --required-atoms")
    result = {}
    if config.pred_error:
        if config.kappa is None or (config.d is None and config.constants is None):
            raise UsageError("--pred-error needs --kappa and --d or --constants")
        result["kappa"] = config.kappa
        if config.d is not None:
            result["d"] = config.d
            result["symmetric_constant"] = symmetric_constant(config.d)
            result["predicted_error_symmetric"] = predicted_error_symmetric(
                config.d, config.kappa
            )
        if config.constants is not None:
            result["constants"] = config.constants
            result["predicted_error"] = predicted_error(config.constants, config.kappa)
    if config.required_atoms:
        if config.bar_length is None or config.target_fpr is None:
            raise UsageError("--required-atoms needs --noise, --bar-length and --target-fpr")
        result["required_atoms"] = required_atom_count(
            config.noise, config.bar_length, config.target_fpr
        )
    visualizer.print_json_data(result)
    return 0


def _dispatch(
    config: RunConfig, service: ServiceInterface, visualizer: VisualizerInterface
) -> int:
    if config.command == "train":
        return _train(config, service)
    if config.command == "eval":
        return _evaluate(config, service)
    if config.command == "queens":
        return _queens(config, service, visualizer)
    if config.command == "exact-oracle":
        return _exact_oracle(config, service)
    if config.command == "gen-data":
        return _gen_data(config, service)
    return _theory(config, visualizer)


@inject
def run(
    argv: Optional[Sequence[str]] = None,
    service: ServiceInterface = Provide["service"],
    visualizer: VisualizerInterface = Provide["visualizer"],
) -> int:
    """Run one command line and return its exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = parse_run_config(argv)
        if config.log_level is not None:
            set_package_log_level(logging.getLevelName(config.log_level))
        logger.info(f"Running {config.command}")
        code = _dispatch(config, service, visualizer)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0
    except UsageError as e:
        print(e, file=sys.stderr)
        return 1
    except ValidationError as e:
        print(f"algebraic-learning: error: {e}", file=sys.stderr)
        return 1
    except (AlgebraException, LearningException, ProblemException) as e:
        details = f": {e.details}" if e.details else ""
        logger.error(f"{type(e).__name__}: {e.message}{details}")
        print(f"algebraic-learning: {e.message}{details}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"algebraic-learning: {e}", file=sys.stderr)
        return 2
    logger.info(f"{config.command} finished with exit code {code}")
    return code


def main() -> None:
    sys.exit(run())
