from typing import List, Optional

from ..results import ResultTable
from .base import ResultSink


class MemorySink(ResultSink):
    """Keeps every saved table in memory."""

    def __init__(self):
        self.tables: List[ResultTable] = []

    def save(self, table: ResultTable) -> None:
        self.tables.append(table)

    def load(self) -> Optional[ResultTable]:
        """Last table saved."""
        return self.tables[-1] if self.tables else None

    def clear(self) -> None:
        self.tables = []

    def close(self) -> None:
        pass  # Nothing to release
