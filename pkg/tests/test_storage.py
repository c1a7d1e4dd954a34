import json
import math

import pytest

from slt.results import ResultTable
from slt.storage import CSVSink, JSONSink, MemorySink, open_sink
from slt.storage.base import format_cell, parse_cell


@pytest.fixture
def table():
    """Characteristic-function rows with a NOTE."""
    table = ResultTable(["mu", "lambda", "w"])
    table.append({"mu": 1.0, "lambda": 1.0, "w": -0.1})
    table.append({"mu": 0.1, "lambda": 0.010000000000000002, "w": None})
    table.add_note("Delta24=0: leading terms vanish")
    return table


def test_format_cell():
    """Test cell rendering: 17 digits, empty for missing, lowercase booleans."""
    assert format_cell(0.1) == "0.10000000000000001"
    assert format_cell(None) == ""
    assert format_cell(math.nan) == ""
    assert format_cell(True) == "true"
    assert format_cell(3) == "3"
    assert format_cell("NOTE") == "NOTE"


def test_parse_cell():
    """Test reading cells back."""
    assert parse_cell("") is None
    assert parse_cell("false") is False
    assert parse_cell("7") == 7
    assert parse_cell("0.10000000000000001") == 0.1
    assert parse_cell("phi+") == "phi+"


def test_csv_layout(table, tmp_path):
    """Test header row, LF endings and the trailing NOTE row."""
    path = tmp_path / "out" / "charfn.csv"
    CSVSink(path).save(table)
    raw = path.read_bytes()
    assert b"\r\n" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "mu,lambda,w"
    assert lines[1] == "1,1,-0.10000000000000001"
    assert lines[2] == "0.10000000000000001,0.010000000000000002,"
    assert lines[3] == "NOTE,Delta24=0: leading terms vanish,"


def test_csv_load(table, tmp_path):
    """Test CSV tables load back with notes separated."""
    sink = CSVSink(tmp_path / "t.csv")
    assert sink.load() is None
    sink.save(table)
    loaded = sink.load()
    assert loaded.columns == ["mu", "lambda", "w"]
    assert loaded.column("w") == [-0.1, None]
    assert loaded.notes == ["Delta24=0: leading terms vanish"]
    sink.clear()
    assert not (tmp_path / "t.csv").exists()


def test_csv_stdout(table, capsys):
    """Test that '-' writes to stdout."""
    CSVSink("-").save(table)
    out = capsys.readouterr().out
    assert out == CSVSink().render(table)
    assert out.startswith("mu,lambda,w\n")


def test_json_round_trip(table, tmp_path):
    """Test the JSON array layout and loading it back."""
    path = tmp_path / "t.json"
    sink = JSONSink(path)
    sink.save(table)
    records = json.loads(path.read_text())
    assert len(records) == 3
    assert all(list(r.keys()) == ["mu", "lambda", "w"] for r in records)
    assert records[1]["w"] is None
    assert records[2]["mu"] == "NOTE"
    loaded = sink.load()
    assert loaded.column("lambda") == [1.0, 0.010000000000000002]
    assert loaded.notes == table.notes


def test_json_nan_becomes_null(tmp_path):
    """Test that non-finite floats are written as null."""
    table = ResultTable(["x"], [{"x": math.inf}])
    path = tmp_path / "nan.json"
    JSONSink(path).save(table)
    assert json.loads(path.read_text()) == [{"x": None}]


def test_memory_sink(table):
    """Test the in-memory sink."""
    with MemorySink() as sink:
        assert sink.load() is None
        sink.save(table)
        assert sink.load() is table
        sink.clear()
        assert sink.tables == []


def test_open_sink(tmp_path):
    """Test choosing a sink by format name."""
    assert isinstance(open_sink(tmp_path / "a", "csv"), CSVSink)
    assert isinstance(open_sink(tmp_path / "a", "json"), JSONSink)
    with pytest.raises(ValueError):
        open_sink(tmp_path / "a", "xml")
