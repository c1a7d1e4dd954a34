"""CSV file result sink."""

import csv
import io
import sys
from pathlib import Path
from typing import Optional, Union

from ..results import ResultTable
from .base import ResultSink, format_cell, note_row, parse_cell, split_notes


class CSVSink(ResultSink):
    """Comma separated, header row, LF line endings, 17 significant digits."""

    def __init__(self, path: Optional[Union[str, Path]] = None):
        """Initialize CSV sink.

        Args:
            path: Output file; None or "-" writes to stdout
        """
        self.path = None if path in (None, "-") else Path(path)

    def render(self, table: ResultTable) -> str:
        """Text of the table exactly as it is written."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.as_list() + [note_row(table, text) for text in table.notes]:
            writer.writerow([format_cell(row[name]) for name in table.columns])
        return buffer.getvalue()

    def save(self, table: ResultTable) -> None:
        """Save table to the CSV file."""
        text = self.render(table)
        if self.path is None:
            sys.stdout.write(text)
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "w", newline="") as f:
            f.write(text)

    def load(self) -> Optional[ResultTable]:
        """Load a table back; None if there is no file."""
        if self.path is None or not self.path.exists():
            return None
        with open(self.path, "r", newline="") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if header is None:
                return ResultTable([])
            rows = [dict(zip(header, (parse_cell(cell) for cell in line))) for line in reader]
        return split_notes(header, rows)

    def clear(self) -> None:
        """Delete the CSV file."""
        if self.path and self.path.exists():
            self.path.unlink()

    def close(self) -> None:
        """Close sink."""
        pass  # Every save opens and closes its own file
