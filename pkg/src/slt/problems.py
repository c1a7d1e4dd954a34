"""Built-in problems and problem lookup by path or name."""

import math
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, Union

from .errors import ProblemFileError
from .model import (
    BoundaryCoefficients,
    PieceCoefficients,
    ProblemDomain,
    ProblemSpec,
    TransmissionCoefficients,
)
from .schema import load_problem_file

# y(-pi) + lambda y'(-pi) = 0 and lambda y(pi) + y'(pi) = 0
_EXAMPLE_BC = BoundaryCoefficients(
    alpha10=1.0, alpha11=0.0, alpha10p=0.0, alpha11p=1.0,
    alpha20=0.0, alpha21=-1.0, alpha20p=1.0, alpha21p=0.0,
)


def paper_example(strict: bool = False) -> ProblemSpec:
    """-y'' = lambda y on [-pi, 0) U (0, pi] with y(0-) = 2 y(0+), y'(0-) = y'(0+)."""
    return ProblemSpec(
        domain=ProblemDomain(-math.pi, 0.0, math.pi),
        coeffs=PieceCoefficients(p_minus=1.0, p_plus=1.0),
        bc=_EXAMPLE_BC,
        tm=TransmissionCoefficients.from_rows([[1.0, 0.0, -2.0, 0.0], [0.0, 1.0, 0.0, -1.0]]),
        strict=strict,
        name="paper-example",
    )


def desk_benchmark(strict: bool = False) -> ProblemSpec:
    """The example with y(0-) = 2 y(0+) + y'(0+), which makes Delta24 = 1."""
    return ProblemSpec(
        domain=ProblemDomain(-math.pi, 0.0, math.pi),
        coeffs=PieceCoefficients(p_minus=1.0, p_plus=1.0),
        bc=_EXAMPLE_BC,
        tm=TransmissionCoefficients.from_rows([[1.0, 0.0, -2.0, -1.0], [0.0, 1.0, 0.0, -1.0]]),
        strict=strict,
        name="desk-benchmark",
    )


def dirichlet(strict: bool = False) -> ProblemSpec:
    """-y'' = lambda y on [0, pi], y(0) = y(pi) = 0, continuity at pi/2."""
    return ProblemSpec(
        domain=ProblemDomain(0.0, 0.5 * math.pi, math.pi),
        coeffs=PieceCoefficients(p_minus=1.0, p_plus=1.0),
        bc=BoundaryCoefficients(
            alpha10=1.0, alpha11=0.0, alpha10p=0.0, alpha11p=0.0,
            alpha20=1.0, alpha21=0.0, alpha20p=0.0, alpha21p=0.0,
        ),
        tm=TransmissionCoefficients.from_rows([[1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 0.0, -1.0]]),
        strict=strict,
        name="dirichlet",
    )


BUILTINS: Dict[str, Callable[..., ProblemSpec]] = {
    "paper-example": paper_example,
    "desk-benchmark": desk_benchmark,
    "dirichlet": dirichlet,
}


def load_problem(source: Union[str, Path], strict: bool = False) -> ProblemSpec:
    """Built-in problem by name, otherwise a problem file.

    ``strict`` turns on strict sign checks; a file may also request them.

    Raises:
        ProblemFileError: If the name is unknown and no such file exists
    """
    key = str(source)
    if key in BUILTINS:
        return BUILTINS[key](strict=strict)
    path = Path(key)
    if not path.exists():
        raise ProblemFileError(f"No built-in problem or file named {key!r}; "
                               f"built-ins: {', '.join(sorted(BUILTINS))}")
    spec = load_problem_file(path)
    if strict and not spec.strict:
        spec = replace(spec, strict=True)
    return spec
