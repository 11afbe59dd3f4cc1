from pathlib import Path
from typing import Optional, Union

from algebraic_learning.logger import get_logger
from algebraic_learning.services.command import Command

logger = get_logger(__name__)


class WriteFileCommand(Command):
    """Write a text file; undo restores what was there before."""

    def __init__(self, path: Union[str, Path], content: str):
        self._path = Path(path)
        self._content = content
        self._previous: Optional[str] = None
        self._written = False

    def execute(self) -> Path:
        if self._path.exists():
            self._previous = self._path.read_text(encoding="utf-8")
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._path.write_text(self._content, encoding="utf-8")
        self._written = True
        logger.debug(f"Wrote {len(self._content)} characters to {self._path}")
        return self._path

    def undo(self):
        # a write that failed left nothing to take back
        if not self._written:
            return
        if self._previous is not None:
            self._path.write_text(self._previous, encoding="utf-8")
            logger.info(f"Restored previous content of {self._path}")
        else:
            self._path.unlink(missing_ok=True)
            logger.info(f"Removed {self._path}")
        self._written = False
