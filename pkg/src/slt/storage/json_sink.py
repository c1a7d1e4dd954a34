"""JSON file result sink."""

import json
import sys
from pathlib import Path
from typing import Optional, Union

from ..results import ResultTable
from .base import ResultSink, json_value, note_row, split_notes


class JSONSink(ResultSink):
    """Writes a table as a JSON array of objects with identical keys."""

    def __init__(self, path: Optional[Union[str, Path]] = None, indent: Optional[int] = 2):
        """Initialize JSON sink.

        Args:
            path: Output file; None or "-" writes to stdout
            indent: Indentation passed to json.dump
        """
        self.path = None if path in (None, "-") else Path(path)
        self.indent = indent

    def _records(self, table: ResultTable):
        rows = table.as_list() + [note_row(table, text) for text in table.notes]
        return [{name: json_value(row[name]) for name in table.columns} for row in rows]

    def save(self, table: ResultTable) -> None:
        """Save table to the JSON file."""
        records = self._records(table)
        if self.path is None:
            json.dump(records, sys.stdout, indent=self.indent)
            sys.stdout.write("\n")
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "w", newline="\n") as f:
            json.dump(records, f, indent=self.indent)
            f.write("\n")

    def load(self) -> Optional[ResultTable]:
        """Load a table back; None if there is no file."""
        if self.path is None or not self.path.exists():
            return None
        with open(self.path, "r") as f:
            records = json.load(f)
        if not records:
            return ResultTable([])
        return split_notes(list(records[0].keys()), records)

    def clear(self) -> None:
        """Delete the JSON file."""
        if self.path and self.path.exists():
            self.path.unlink()

    def close(self) -> None:
        """Close sink."""
        pass  # Every save opens and closes its own file
