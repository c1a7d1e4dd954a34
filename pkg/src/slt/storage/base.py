"""Base result sink interface and shared cell formatting."""

from abc import ABC, abstractmethod
import math
from typing import Any, Optional

from ..results import ResultTable

NOTE_MARKER = "NOTE"


def format_cell(value: Any) -> str:
    """Render one CSV cell; floats keep 17 significant digits, missing values are empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return "" if math.isnan(value) else ("inf" if value > 0 else "-inf")
        return format(value, ".17g")
    return str(value)


def parse_cell(text: str) -> Any:
    """Inverse of format_cell for reading tables back."""
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def json_value(value: Any) -> Any:
    """JSON has no NaN or infinity; they become null."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


class ResultSink(ABC):
    """Abstract base class for result sinks."""

    @abstractmethod
    def save(self, table: ResultTable) -> None:
        """Write a table."""
        pass

    @abstractmethod
    def load(self) -> Optional[ResultTable]:
        """Read back the last table written, if the sink can."""
        pass

    @abstractmethod
    def clear(self) -> None:
        """Remove whatever the sink holds."""
        pass

    @abstractmethod
    def close(self) -> None:
        """Close the sink and free resources."""
        pass

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()


def note_row(table: ResultTable, text: str) -> dict:
    """Row carrying a NOTE in the first column and the text in the second."""
    row = {name: None for name in table.columns}
    row[table.columns[0]] = NOTE_MARKER
    if len(table.columns) > 1:
        row[table.columns[1]] = text
    return row


def split_notes(columns, rows) -> ResultTable:
    """Build a ResultTable, separating NOTE rows from data rows."""
    table = ResultTable(columns)
    for row in rows:
        if row.get(columns[0]) == NOTE_MARKER:
            table.add_note(str(row.get(columns[1], "")) if len(columns) > 1 else "")
        else:
            table.append(row)
    return table
