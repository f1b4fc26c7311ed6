import datetime
import json
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any

import pytz


class ExitCode(IntEnum):
    SUCCESS = 0
    REJECTED = 1
    USAGE = 2


@dataclass
class Report:
    """
    Result of a command.

    Attributes
    ----------
    command : str
        the command name
    exit_code : ExitCode
        0 success, 1 rejection or failure, 2 usage error
    payload : dict[str, Any]
        JSON-compatible result: invariant, verdict, table rows...
    stats : dict[str, Any]
        instrumentation counters
    lines : list[str]
        human-readable rendering of the result
    """

    command: str
    exit_code: ExitCode = ExitCode.SUCCESS
    payload: dict[str, Any] = field(default_factory=dict)
    stats: dict[str, Any] = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)

    def fail(self, message: str) -> None:
        self.exit_code = ExitCode.REJECTED
        self.lines.append(message)

    def merge_stats(self, prefix: str, counters: dict[str, Any]) -> None:
        for key, value in counters.items():
            self.stats[f"{prefix}.{key}"] = self.stats.get(f"{prefix}.{key}", 0) + value

    def to_json(self, timestamp: bool = True, timezone: str = "UTC") -> str:
        data: dict[str, Any] = {
            "command": self.command,
            "exit_code": int(self.exit_code),
            "payload": self.payload,
            "stats": dict(sorted(self.stats.items())),
        }
        if timestamp:
            data["timestamp"] = datetime.datetime.now(pytz.timezone(timezone)).isoformat()
        return json.dumps(data, indent=2)

    def to_text(self) -> str:
        text = list(self.lines)
        if self.stats:
            text.append("stats:")
            text.extend(f"  {key}: {value}" for key, value in sorted(self.stats.items()))
        return "\n".join(text)


def format_table(header: list[str], rows: list[list[Any]]) -> list[str]:
    """
    Left-aligned plain text table

    A header line then one line per row, laid out like a plain ASCII listing
    without borders. Each column is padded to its widest cell and columns are
    two spaces apart.

    Examples
    --------
    >>> print("\\n".join(format_table(["n", "size"], [[1, 3], [10, 2047]])))
    n   size
    1   3
    10  2047
    """
    cells = [header] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    return [
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in cells
    ]
