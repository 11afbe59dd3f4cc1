from abc import ABC, abstractmethod
from typing import Any, List, Optional

from algebraic_learning.logger import get_logger

logger = get_logger(__name__)


class Command(ABC):
    @abstractmethod
    def execute(self) -> Any:
        pass

    @abstractmethod
    def undo(self) -> Any:
        pass


class CommandInvoker:
    """Executes commands and takes them back, newest first.

    The invoker is shared by every service call, so a rollback is bounded by
    a mark taken before the call started.
    """

    def __init__(self) -> None:
        self._command: Optional[Command] = None
        self._history = CommandHistory()

    def set_command(self, command: Command) -> None:
        self._command = command

    def execute_command(self) -> Any:
        if self._command is None:
            raise ValueError("No command set")
        # recorded first: a command that fails halfway still gets its undo
        self._history.add_command(self._command)
        return self._command.execute()

    def undo_command(self) -> Any:
        return self._history.undo_last()

    def mark(self) -> int:
        """Position to roll back to with `undo_to`."""
        return len(self._history)

    def undo_to(self, mark: int) -> int:
        """Undo the commands executed after `mark`. Returns how many were undone."""
        undone = 0
        while len(self._history) > mark:
            self._history.undo_last()
            undone += 1
        if undone:
            logger.info(f"Undid {undone} command(s)")
        return undone

    def undo_all(self) -> int:
        return self.undo_to(0)


class CommandHistory:
    def __init__(self) -> None:
        self._commands: List[Command] = []

    def __len__(self) -> int:
        return len(self._commands)

    def add_command(self, command: Command) -> None:
        self._commands.append(command)

    def undo_last(self) -> Any:
        if not self._commands:
            logger.info("No commands to undo.")
            return None
        return self._commands.pop().undo()
