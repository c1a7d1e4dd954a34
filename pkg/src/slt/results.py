"""Tabular results produced by the slt commands."""

from typing import Any, Dict, Iterator, List, Optional, Sequence, Union

Row = Dict[str, Any]


class ResultTable:
    """Ordered rows with a fixed column list, plus free-text NOTE rows."""

    def __init__(self, columns: Sequence[str], rows: Optional[List[Row]] = None,
                 notes: Optional[List[str]] = None):
        """Initialize a table.

        Args:
            columns: Column names, in output order
            rows: Initial rows; missing keys read as None
            notes: NOTE lines emitted after the rows
        """
        self.columns = list(columns)
        self._rows: List[Row] = []
        self.notes: List[str] = list(notes or [])
        for row in rows or []:
            self.append(row)

    def __len__(self) -> int:
        return len(self._rows)

    def __iter__(self) -> Iterator[Row]:
        return iter(self._rows)

    def __getitem__(self, index: Union[int, slice]) -> Union[Row, "ResultTable"]:
        if isinstance(index, slice):
            return ResultTable(self.columns, self._rows[index], self.notes)
        return self._rows[index]

    def append(self, row: Row) -> None:
        """Add a row; unknown keys are rejected.

        Raises:
            KeyError: If the row has a key outside the column list
        """
        extra = set(row) - set(self.columns)
        if extra:
            raise KeyError(f"Unknown columns: {sorted(extra)}")
        self._rows.append({name: row.get(name) for name in self.columns})

    def add_note(self, text: str) -> None:
        self.notes.append(text)

    def first(self) -> Optional[Row]:
        return self._rows[0] if self._rows else None

    def last(self) -> Optional[Row]:
        return self._rows[-1] if self._rows else None

    def column(self, name: str) -> List[Any]:
        """All values of one column, in row order."""
        if name not in self.columns:
            raise KeyError(name)
        return [row[name] for row in self._rows]

    def pluck(self, *names: str) -> List[Row]:
        return [{name: row[name] for name in names if name in row} for row in self._rows]

    def sort_by(self, name: str, reverse: bool = False) -> "ResultTable":
        """New table sorted by a column; None values go last."""
        present = [row for row in self._rows if row[name] is not None]
        missing = [row for row in self._rows if row[name] is None]
        ordered = sorted(present, key=lambda row: row[name], reverse=reverse) + missing
        return ResultTable(self.columns, ordered, self.notes)

    def as_list(self) -> List[Row]:
        return list(self._rows)

    def count(self) -> int:
        return len(self._rows)

    def is_empty(self) -> bool:
        return not self._rows
