import json
import math
from pathlib import Path

import pytest

from slt.errors import ProblemFileError
from slt.model import validate
from slt.problems import BUILTINS, load_problem
from slt.schema import load_problem_file, parse_ini, spec_from_document, validate_document

EXAMPLE_INI = """
[meta]
name = jump-example

[domain]
a = -3.141592653589793
c = 0
b = 3.141592653589793

[equation]
p_minus = 1
p_plus = 4
q_minus = 0.5
q_plus_poly = 0, 1, 2

[bc_left]
alpha10 = 1
alpha11 = 0
alpha10p = 0
alpha11p = 1

[bc_right]
alpha20 = 0
alpha21 = -1
alpha20p = 1
alpha21p = 0

[transmission]
row1 = 1 0 -2 -1
row2 = 0 1 0 -1

[options]
strict = no
"""


@pytest.fixture
def document():
    """A valid JSON problem document."""
    return {
        "name": "doc",
        "domain": {"a": 0.0, "c": 1.0, "b": 2.0},
        "equation": {"p_minus": 1.0, "p_plus": 2.0, "q_plus_poly": [1.0, 0.0, 3.0]},
        "bc_left": {"alpha10": 1, "alpha11": 0, "alpha10p": 0, "alpha11p": 0},
        "bc_right": {"alpha20": 1, "alpha21": 0, "alpha20p": 0, "alpha21p": 0},
        "transmission": [[1, 0, -1, 0], [0, 1, 0, -1]],
    }


def test_valid_document(document):
    """Test that a complete document passes and builds a problem."""
    validate_document(document)
    spec = spec_from_document(document)
    assert spec.name == "doc"
    assert spec.coeffs.p_plus == 2.0
    assert spec.coeffs.q_plus(2.0) == pytest.approx(13.0)
    assert spec.coeffs.q_minus(5.0) == 0.0
    assert not spec.strict


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("domain"),
    lambda d: d["equation"].update(p_minus="one"),
    lambda d: d["transmission"].append([0, 0, 0, 1]),
    lambda d: d["transmission"][0].pop(),
    lambda d: d["bc_left"].update(alpha12=1.0),
    lambda d: d.update(options={"strict": "yes"}),
])
def test_invalid_documents(document, mutate):
    """Test that schema violations raise ProblemFileError."""
    mutate(document)
    with pytest.raises(ProblemFileError):
        validate_document(document)


def test_error_lists_location(document):
    """Test that the error message names the offending field."""
    document["domain"]["c"] = "middle"
    with pytest.raises(ProblemFileError, match="domain/c"):
        validate_document(document)


def test_parse_ini():
    """Test the INI layout."""
    document = parse_ini(EXAMPLE_INI)
    assert document["name"] == "jump-example"
    assert document["equation"]["q_minus_poly"] == [0.5]
    assert document["equation"]["q_plus_poly"] == [0.0, 1.0, 2.0]
    assert document["transmission"] == [[1.0, 0.0, -2.0, -1.0], [0.0, 1.0, 0.0, -1.0]]
    assert document["options"] == {"strict": False}


def test_parse_ini_errors():
    """Test malformed INI input."""
    with pytest.raises(ProblemFileError):
        parse_ini("[domain\na = 1")
    with pytest.raises(ProblemFileError):
        parse_ini("[domain]\na = one")
    with pytest.raises(ProblemFileError):
        parse_ini("[equation]\np_minus = 1 2")


def test_load_ini_file(tmp_path):
    """Test loading an INI problem file into a validated problem."""
    path = tmp_path / "jump.ini"
    path.write_text(EXAMPLE_INI)
    spec = load_problem_file(path)
    problem = validate(spec)
    assert spec.name == "jump-example"
    assert problem.domain.b == pytest.approx(math.pi)
    assert problem.tm.delta(2, 4) == 1.0
    assert problem.q_bound == pytest.approx(math.pi + 2 * math.pi ** 2)


def test_load_json_file(tmp_path, document):
    """Test loading a JSON problem file; the file stem names unnamed problems."""
    document.pop("name")
    path = tmp_path / "classical.json"
    path.write_text(json.dumps(document))
    assert load_problem_file(path).name == "classical"


def test_load_bad_files(tmp_path):
    """Test unreadable and malformed files."""
    with pytest.raises(ProblemFileError):
        load_problem_file(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ProblemFileError):
        load_problem_file(bad)


def test_builtins():
    """Test the built-in problems and lookup by name."""
    assert set(BUILTINS) == {"paper-example", "desk-benchmark", "dirichlet"}
    example = validate(load_problem("paper-example"))
    assert example.case.degenerate_leading
    assert example.tm.delta(1, 2) == 1.0 and example.tm.delta(3, 4) == 2.0
    assert not validate(load_problem("desk-benchmark")).case.degenerate_leading
    assert load_problem("dirichlet", strict=True).strict
    with pytest.raises(ProblemFileError):
        load_problem("no-such-problem")


def test_strict_flag_from_file(tmp_path, document):
    """Test that --strict upgrades a non-strict file."""
    path = tmp_path / "p.json"
    path.write_text(json.dumps(document))
    assert not load_problem(path).strict
    assert load_problem(path, strict=True).strict


def test_readme_ini_example(tmp_path):
    """Test that the INI example in the README loads, inline comments included."""
    readme = (Path(__file__).resolve().parents[1] / "README.md").read_text()
    text = readme.split("```ini\n", 1)[1].split("```", 1)[0]
    path = tmp_path / "readme.ini"
    path.write_text(text)
    spec = load_problem_file(path)
    assert spec.coeffs.q_minus(2.0) == pytest.approx(2.0)
    assert spec.coeffs.q_plus(2.0) == 0.0
    assert validate(spec).tm.delta(3, 4) == 2.0


def test_inline_comments():
    """Test that ';' and '#' start inline comments in INI values."""
    document = parse_ini("[equation]\np_minus = 1  # left\np_plus = 4 ; right\n")
    assert document["equation"] == {"p_minus": 1.0, "p_plus": 4.0}
