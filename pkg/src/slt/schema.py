"""Problem-document schema and loaders for INI-style and JSON problem files."""

import configparser
import json
from pathlib import Path
from typing import Any, Dict, List, Union

import jsonschema

from .errors import ProblemFileError
from .logging_config import get_logger
from .model import (
    BoundaryCoefficients,
    PieceCoefficients,
    PolynomialPotential,
    ProblemDomain,
    ProblemSpec,
    TransmissionCoefficients,
)

logger = get_logger(__name__)

_NUMBER = {"type": "number"}
_FOUR = {"type": "array", "items": _NUMBER, "minItems": 4, "maxItems": 4}
_POLY = {"type": "array", "items": _NUMBER, "minItems": 1}

PROBLEM_SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["domain", "equation", "bc_left", "bc_right", "transmission"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "domain": {
            "type": "object",
            "required": ["a", "c", "b"],
            "additionalProperties": False,
            "properties": {"a": _NUMBER, "c": _NUMBER, "b": _NUMBER},
        },
        "equation": {
            "type": "object",
            "required": ["p_minus", "p_plus"],
            "additionalProperties": False,
            "properties": {
                "p_minus": _NUMBER,
                "p_plus": _NUMBER,
                "q_minus_poly": _POLY,
                "q_plus_poly": _POLY,
            },
        },
        "bc_left": {
            "type": "object",
            "required": ["alpha10", "alpha11", "alpha10p", "alpha11p"],
            "additionalProperties": False,
            "properties": {k: _NUMBER for k in ("alpha10", "alpha11", "alpha10p", "alpha11p")},
        },
        "bc_right": {
            "type": "object",
            "required": ["alpha20", "alpha21", "alpha20p", "alpha21p"],
            "additionalProperties": False,
            "properties": {k: _NUMBER for k in ("alpha20", "alpha21", "alpha20p", "alpha21p")},
        },
        "transmission": {"type": "array", "items": _FOUR, "minItems": 2, "maxItems": 2},
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"strict": {"type": "boolean"}},
        },
    },
}

_VALIDATOR = jsonschema.Draft7Validator(PROBLEM_SCHEMA)


def validate_document(document: Dict[str, Any]) -> None:
    """Check a problem document against PROBLEM_SCHEMA.

    Raises:
        ProblemFileError: Listing every schema violation found
    """
    errors = sorted(_VALIDATOR.iter_errors(document), key=lambda e: list(e.absolute_path))
    if errors:
        details = "; ".join(
            f"{'/'.join(str(p) for p in e.absolute_path) or '<root>'}: {e.message}" for e in errors)
        raise ProblemFileError(f"Invalid problem document: {details}")


def _numbers(text: str, where: str) -> List[float]:
    try:
        return [float(token) for token in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ProblemFileError(f"{where}: {exc}") from exc


def _number(text: str, where: str) -> float:
    values = _numbers(text, where)
    if len(values) != 1:
        raise ProblemFileError(f"{where}: expected one number, got {text!r}")
    return values[0]


def parse_ini(text: str) -> Dict[str, Any]:
    """Turn INI-style problem text into a problem document.

    Sections: [domain] a c b; [equation] p_minus p_plus and optional
    q_minus / q_plus constants or q_minus_poly / q_plus_poly coefficient
    lists (lowest degree first); [bc_left] alpha10 alpha11 alpha10p alpha11p;
    [bc_right] alpha20 alpha21 alpha20p alpha21p; [transmission] row1 row2;
    [options] strict.

    Raises:
        ProblemFileError: On syntax errors or malformed numbers
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ProblemFileError(f"Cannot parse problem file: {exc}") from exc

    document: Dict[str, Any] = {}
    for section in parser.sections():
        items = parser[section]
        if section == "transmission":
            rows = [_numbers(items[key], f"[transmission] {key}") for key in ("row1", "row2") if key in items]
            document[section] = rows
        elif section == "options":
            try:
                document[section] = {key: items.getboolean(key) for key in items}
            except ValueError as exc:
                raise ProblemFileError(f"[options]: {exc}") from exc
        elif section == "equation":
            equation: Dict[str, Any] = {}
            for key, value in items.items():
                if key in ("q_minus", "q_plus"):
                    equation[f"{key}_poly"] = [_number(value, f"[equation] {key}")]
                elif key.endswith("_poly"):
                    equation[key] = _numbers(value, f"[equation] {key}")
                else:
                    equation[key] = _number(value, f"[equation] {key}")
            document[section] = equation
        elif section == "meta":
            document.update({key: value for key, value in items.items()})
        else:
            document[section] = {key: _number(value, f"[{section}] {key}") for key, value in items.items()}
    return document


def spec_from_document(document: Dict[str, Any], name: str = "") -> ProblemSpec:
    """Build a ProblemSpec from a schema-valid document."""
    validate_document(document)
    dom, eq = document["domain"], document["equation"]
    left, right = document["bc_left"], document["bc_right"]
    return ProblemSpec(
        domain=ProblemDomain(dom["a"], dom["c"], dom["b"]),
        coeffs=PieceCoefficients(
            p_minus=eq["p_minus"],
            p_plus=eq["p_plus"],
            q_minus=PolynomialPotential(eq.get("q_minus_poly", [0.0])),
            q_plus=PolynomialPotential(eq.get("q_plus_poly", [0.0])),
        ),
        bc=BoundaryCoefficients(
            alpha10=left["alpha10"], alpha11=left["alpha11"],
            alpha10p=left["alpha10p"], alpha11p=left["alpha11p"],
            alpha20=right["alpha20"], alpha21=right["alpha21"],
            alpha20p=right["alpha20p"], alpha21p=right["alpha21p"],
        ),
        tm=TransmissionCoefficients.from_rows(document["transmission"]),
        strict=document.get("options", {}).get("strict", False),
        name=document.get("name", name),
    )


def load_problem_file(path: Union[str, Path]) -> ProblemSpec:
    """Read a JSON (.json) or INI-style problem file.

    Raises:
        ProblemFileError: If the file cannot be read, parsed or validated
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemFileError(f"Cannot read {path}: {exc}") from exc
    if path.suffix.lower() == ".json":
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ProblemFileError(f"{path}: {exc}") from exc
    else:
        document = parse_ini(text)
    logger.debug("loaded problem document from %s", path)
    return spec_from_document(document, name=path.stem)
