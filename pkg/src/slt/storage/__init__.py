"""Result sinks for slt tables."""

from .base import ResultSink
from .csv_sink import CSVSink
from .json_sink import JSONSink
from .memory_sink import MemorySink

__all__ = ['ResultSink', 'CSVSink', 'JSONSink', 'MemorySink', 'open_sink']


def open_sink(path, fmt: str = "csv") -> ResultSink:
    """Sink for an output path and a format name ("csv" or "json")."""
    if fmt == "csv":
        return CSVSink(path)
    if fmt == "json":
        return JSONSink(path)
    raise ValueError(f"Unknown output format: {fmt}")
