from abc import ABC, abstractmethod
from typing import Sequence


class VisualizerInterface(ABC):
    """Abstract base class defining the interface for result visualizers.

    This interface establishes the contract for classes that show the outcome
    of learning runs to a user: JSON summaries of models, evaluations and
    experiment records, and queens boards.
    """

    @abstractmethod
    def print_json_data(self, data: dict) -> None:
        """Print a JSON-compatible dictionary in a formatted, visual way.

        Args:
            data (dict): A dictionary made of JSON types only (numbers,
                strings, lists, nested dictionaries, None).

        Returns:
            None: This method outputs directly to the console/display.

        Example:
            >>> visualizer.print_json_data({"error": 0.02, "atoms": 31})
            # Displays highlighted JSON
        """
        pass

    @abstractmethod
    def print_board(self, rows: Sequence[str], title: str = "") -> None:
        """Print a rendered queens board.

        Args:
            rows (Sequence[str]): Board lines as produced by `render_board`,
                highest rank first.
            title (str): Caption shown with the board, e.g. the epoch.

        Returns:
            None: This method outputs directly to the console/display.

        Note:
            Implementations should keep the characters `Q`, `.`, `?` and `!`
            readable so boards can be compared across epochs.
        """
        pass
