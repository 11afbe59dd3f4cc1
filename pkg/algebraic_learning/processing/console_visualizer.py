import json
from typing import Sequence

from rich import print_json
from rich.console import Console
from rich.panel import Panel
from rich.text import Text

from algebraic_learning.processing.visualizer_interface import VisualizerInterface

SQUARE_STYLES = {"Q": "bold green", "!": "bold red", "?": "yellow"}


class ConsoleVisualizer(VisualizerInterface):

    def __init__(self, console: Console = None) -> None:
        self._console = console or Console()

    def print_json_data(self, data: dict):
        print_json(json.dumps(data, indent=4))

    def print_board(self, rows: Sequence[str], title: str = ""):
        text = Text()
        for i, row in enumerate(rows):
            for ch in row:
                text.append(ch, style=SQUARE_STYLES.get(ch, ""))
            if i < len(rows) - 1:
                text.append("\n")
        self._console.print(Panel(text, title=title or None, expand=False))
