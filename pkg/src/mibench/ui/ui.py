"""
Terminal output for the mibench command line.

Everything a command shows the user goes through terminal_print; diagnostics go to the
"mibench" logger instead. Colours are only emitted when stdout is a terminal, so redirected
output and captured test output stay plain text.
"""

import platform
import sys
from enum import Enum
from typing import Any, Dict, Sequence

if platform.system() == "Windows":
    try:
        import colorama

        colorama.just_fix_windows_console()
    except (ImportError, AttributeError):
        # older colorama or none at all: fall back to plain text below
        pass

RESET = "\033[0m"


class PrintType(Enum):
    """Kinds of terminal output; the value is the ANSI prefix."""

    INFO = ""
    ERROR = "\033[91m"
    PROCESSING = "\033[96m\033[2m"
    SUCCESS = "\033[92m\033[1m"
    WARNING = "\033[93m\033[1m"
    HEADER = "\033[97m\033[1m\033[4m"


def use_colour() -> bool:
    stream = sys.stdout
    return bool(getattr(stream, "isatty", None) and stream.isatty())


def terminal_print(message: Any, print_type: PrintType = PrintType.INFO) -> None:
    """Print one message, colour-coded by print_type when stdout is a terminal."""
    text = str(message)
    if print_type.value and use_colour():
        text = f"{print_type.value}{text}{RESET}"
    print(text)


def format_table(rows: Sequence[Sequence[Any]], header: Sequence[str]) -> Dict[str, Any]:
    widths = [len(str(h)) for h in header]
    for row in rows:
        widths = [max(w, len(str(cell))) for w, cell in zip(widths, row)]
    return {
        "header": "  ".join(str(h).ljust(w) for h, w in zip(header, widths)).rstrip(),
        "rows": ["  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows],
    }


def print_table(rows: Sequence[Sequence[Any]], header: Sequence[str]) -> None:
    """Left-aligned table with a HEADER line."""
    table = format_table(rows, header)
    terminal_print(table["header"], PrintType.HEADER)
    for line in table["rows"]:
        terminal_print(line)
