from typing import Dict, Iterable, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, PrivateAttr

from algebraic_learning.algebra.algebra_state import AlgebraState
from algebraic_learning.algebra.elements import RelationSpec
from algebraic_learning.exceptions.algebra_exceptions import (
    UnknownConstantException,
)

SNAPSHOT_VERSION = 1


class PinningEntry(BaseModel):
    """The fingerprint of an atom kept as a hypothesis across epochs."""

    model_config = ConfigDict(frozen=True)

    fingerprint: Tuple[int, ...]
    origin_epoch: int = 0

    @property
    def mask(self) -> int:
        return _mask(self.fingerprint)


class EpochConfig(BaseModel):
    """Parameters of one training epoch."""

    batch: List[RelationSpec]
    epoch: int = Field(default=1, ge=0)
    reduce_every: PositiveInt = 1
    eliminate_redundant: bool = False
    max_trace_iterations: Optional[PositiveInt] = None
    max_pinning_enforced: Optional[int] = Field(default=None, ge=0)


class ProtocolConfig(BaseModel):
    """How batches are sized and when training stops.

    `fixed` keeps the initial sizes, `stagnation` grows both halves by
    `growth` whenever the accuracy on the incoming batch did not increase,
    `error-direction` moves both halves by `step` up when the test error went
    up and down when it went down.
    """

    model_config = ConfigDict(extra="forbid")

    kind: Literal["fixed", "stagnation", "error-direction"] = "fixed"
    positives: PositiveInt = 100
    negatives: PositiveInt = 100
    max_epochs: PositiveInt = 10
    stop_after_zero_error: Optional[PositiveInt] = None
    keep_snapshots: PositiveInt = 10
    growth: float = Field(default=0.05, gt=0)
    step: float = Field(default=0.02, gt=0, lt=1)
    cap: PositiveInt = 2000
    reduce_every: PositiveInt = 1
    eliminate_redundant: bool = False
    max_pinning_enforced: Optional[int] = Field(default=None, ge=0)


class ModelSnapshot(BaseModel):
    """A frozen atomization: constant table, atom fingerprints and pinning.

    Fingerprints list the constant indices above each learned atom. The
    snapshot answers order queries on its own.
    """

    model_config = ConfigDict(frozen=True)

    version: int = SNAPSHOT_VERSION
    seed: Optional[int] = None
    epoch: int = 0
    constants: List[str]
    atoms: List[Tuple[int, ...]]
    pinning: List[Tuple[int, ...]] = Field(default_factory=list)

    _index: Dict[str, int] = PrivateAttr(default_factory=dict)
    _masks: List[int] = PrivateAttr(default_factory=list)

    def model_post_init(self, __context) -> None:
        self._index = {name: i for i, name in enumerate(self.constants)}
        self._masks = [_mask(fingerprint) for fingerprint in self.atoms]

    @classmethod
    def from_state(
        cls,
        state: AlgebraState,
        pinning: Iterable[PinningEntry] = (),
        epoch: int = 0,
    ) -> "ModelSnapshot":
        atoms = sorted(
            tuple(sorted(state.fingerprint(atom))) for atom in state.learned_atoms()
        )
        return cls(
            seed=state.seed,
            epoch=epoch,
            constants=list(state.constant_names),
            atoms=atoms,
            pinning=[entry.fingerprint for entry in pinning],
        )

    @property
    def atom_count(self) -> int:
        return len(self.atoms)

    @property
    def constant_count(self) -> int:
        return len(self.constants)

    @property
    def atom_masks(self) -> List[int]:
        return self._masks

    def constant_index(self, name: str) -> int:
        index = self._index.get(name)
        if index is None:
            raise UnknownConstantException(details=name)
        return index

    def has_constant(self, name: str) -> bool:
        return name in self._index

    def mask_of(self, names: Iterable[str]) -> int:
        bits = 0
        for name in names:
            bits |= 1 << self.constant_index(name)
        return bits

    def atoms_touching(self, constants: int) -> List[int]:
        """Masks of the atoms below some constant of `constants`."""
        return [mask for mask in self._masks if mask & constants]

    def holds(self, lhs: int, rhs: int) -> bool:
        """lhs <= rhs for the merges of two constant masks.

        Every atom below a constant of lhs must be below a constant of rhs.
        """
        return all(mask & rhs for mask in self._masks if mask & lhs)

    def holds_spec(self, spec: RelationSpec) -> bool:
        contained = self.holds(self.mask_of(spec.lhs), self.mask_of(spec.rhs))
        return contained if spec.is_positive else not contained

    def pinning_entries(self) -> List[PinningEntry]:
        return [
            PinningEntry(fingerprint=fingerprint, origin_epoch=self.epoch)
            for fingerprint in self.pinning
        ]


class EpochReport(BaseModel):
    """What one epoch of `fit` saw and produced."""

    model_config = ConfigDict(frozen=True)

    epoch: int
    snapshot: ModelSnapshot
    positives: int
    negatives: int
    pre_batch_error: float
    train_error: float
    retained: int
    pinning_entries: int


def _mask(constants: Iterable[int]) -> int:
    bits = 0
    for constant in constants:
        bits |= 1 << constant
    return bits
