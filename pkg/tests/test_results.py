import pytest

from slt.results import ResultTable


@pytest.fixture
def table():
    """Small eigenvalue table for testing."""
    return ResultTable(
        ["n", "branch", "lambda"],
        [
            {"n": 3, "branch": 1, "lambda": 1.0},
            {"n": 1, "branch": 2, "lambda": 2.25},
            {"n": None, "branch": None, "lambda": -0.5},
        ],
    )


def test_table_creation(table):
    """Test row count, indexing and column order."""
    assert len(table) == 3
    assert table.count() == 3
    assert table[0]["lambda"] == 1.0
    assert table[-1]["n"] is None
    assert table.columns == ["n", "branch", "lambda"]


def test_missing_keys_read_as_none():
    """Test that rows are padded to the column list."""
    table = ResultTable(["x", "y"])
    table.append({"x": 1.5})
    assert table.first() == {"x": 1.5, "y": None}


def test_unknown_key_rejected(table):
    """Test that rows cannot add columns."""
    with pytest.raises(KeyError):
        table.append({"n": 4, "mu": 2.0})


def test_slicing_keeps_notes(table):
    """Test slicing returns a table with the same columns and notes."""
    table.add_note("SeedDegenerate: dense scan")
    part = table[1:]
    assert isinstance(part, ResultTable)
    assert len(part) == 2
    assert part.notes == ["SeedDegenerate: dense scan"]


def test_first_last(table):
    """Test first() and last() methods."""
    assert table.first()["n"] == 3
    assert table.last()["lambda"] == -0.5
    empty = ResultTable(["a"])
    assert empty.first() is None
    assert empty.last() is None
    assert empty.is_empty()


def test_column_and_pluck(table):
    """Test column() and pluck()."""
    assert table.column("lambda") == [1.0, 2.25, -0.5]
    assert table.pluck("n") == [{"n": 3}, {"n": 1}, {"n": None}]
    with pytest.raises(KeyError):
        table.column("mu")


def test_sort_by(table):
    """Test sorting; None values go last."""
    by_lambda = table.sort_by("lambda")
    assert by_lambda.column("lambda") == [-0.5, 1.0, 2.25]
    by_n = table.sort_by("n", reverse=True)
    assert by_n.column("n") == [3, 1, None]
    # the original order is untouched
    assert table.column("n") == [3, 1, None]


def test_iteration(table):
    """Test iteration over rows."""
    assert [row["branch"] for row in table] == [1, 2, None]
    assert table.as_list()[1]["n"] == 1
