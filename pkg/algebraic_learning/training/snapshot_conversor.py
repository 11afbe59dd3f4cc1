import json
from pathlib import Path
from typing import Union

import jsonschema

from algebraic_learning.exceptions.problem_exceptions import SnapshotFormatException
from algebraic_learning.logger import get_logger
from algebraic_learning.training.models import ModelSnapshot

logger = get_logger(__name__)

SCHEMA_PATH = Path(__file__).resolve().parent.parent / "resources" / "snapshot.schema"


class SnapshotConversor:
    """Reads and writes model snapshots as versioned JSON documents."""

    def __init__(self, schema_path: Union[str, Path] = SCHEMA_PATH) -> None:
        with open(schema_path, "r", encoding="utf-8") as schema_file:
            self._schema = json.load(schema_file)

    def _validate_json_with_schema(self, data: dict) -> None:
        try:
            jsonschema.validate(instance=data, schema=self._schema)
        except jsonschema.ValidationError as e:
            raise SnapshotFormatException(details=str(e.message))

    @staticmethod
    def _check_indices(data: dict) -> None:
        count = len(data["constants"])
        for key in ("atoms", "pinning"):
            for fingerprint in data[key]:
                if any(index >= count for index in fingerprint):
                    raise SnapshotFormatException(
                        details=f"{key} entry {fingerprint} exceeds {count} constants"
                    )

    def to_dict(self, snapshot: ModelSnapshot) -> dict:
        return {
            "version": snapshot.version,
            "seed": snapshot.seed,
            "epoch": snapshot.epoch,
            "constants": list(snapshot.constants),
            "atoms": [list(fingerprint) for fingerprint in snapshot.atoms],
            "pinning": [list(fingerprint) for fingerprint in snapshot.pinning],
        }

    def from_dict(self, data: dict) -> ModelSnapshot:
        self._validate_json_with_schema(data)
        self._check_indices(data)
        return ModelSnapshot(
            version=data["version"],
            seed=data["seed"],
            epoch=data["epoch"],
            constants=data["constants"],
            atoms=[tuple(fingerprint) for fingerprint in data["atoms"]],
            pinning=[tuple(fingerprint) for fingerprint in data["pinning"]],
        )

    def dumps(self, snapshot: ModelSnapshot) -> str:
        return json.dumps(self.to_dict(snapshot), ensure_ascii=False)

    def loads(self, text: str) -> ModelSnapshot:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SnapshotFormatException(details=str(e))
        return self.from_dict(data)

    def save(self, snapshot: ModelSnapshot, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.dumps(snapshot) + "\n", encoding="utf-8")
        logger.info(f"Snapshot of epoch {snapshot.epoch} written to {path}")
        return path

    def load(self, path: Union[str, Path]) -> ModelSnapshot:
        snapshot = self.loads(Path(path).read_text(encoding="utf-8"))
        logger.info(
            f"Loaded snapshot with {snapshot.constant_count} constants "
            f"and {snapshot.atom_count} atoms from {path}"
        )
        return snapshot
