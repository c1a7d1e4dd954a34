"""Problem data model: domain, coefficients, boundary and transmission matrices.

The equation is ``-p y'' + q y = lambda y`` on [a, c) and (c, b] with
``p = p_minus`` on the left piece and ``p = p_plus`` on the right piece.
The boundary conditions are

    V1(y) = a10 y(a) - a11 y'(a) - lambda (a10' y(a) - a11' y'(a)) = 0
    V2(y) = a20 y(b) - a21 y'(b) + lambda (a20' y(b) - a21' y'(b)) = 0

and the transmission conditions at c are the two rows of
``T @ (y(c-), y'(c-), y(c+), y'(c+)) = 0`` with
``T[j] = (beta-_j0, beta-_j1, beta+_j0, beta+_j1)``.
"""

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    DomainOrderError,
    NonpositiveP,
    ProblemError,
    SignAssumptionError,
    SingularTransmission,
)
from .logging_config import get_logger

logger = get_logger(__name__)

ArrayLike = Union[float, np.ndarray]
Potential = Callable[[ArrayLike], ArrayLike]

# Column pairs (k, j), 1-based, of every 2x2 minor of T.
MINOR_PAIRS = tuple((k, j) for k in range(1, 5) for j in range(k + 1, 5))


class PolynomialPotential:
    """Potential given by power-series coefficients c0 + c1 x + c2 x^2 + ..."""

    def __init__(self, coefficients: Sequence[float]):
        coefficients = tuple(float(v) for v in coefficients) or (0.0,)
        self.coefficients = coefficients

    def __call__(self, x: ArrayLike) -> ArrayLike:
        return npoly.polyval(x, self.coefficients)

    @property
    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.coefficients)

    def __repr__(self) -> str:
        return f"PolynomialPotential({list(self.coefficients)})"


def constant_potential(value: float = 0.0) -> PolynomialPotential:
    """Potential equal to ``value`` everywhere."""
    return PolynomialPotential([value])


@dataclass(frozen=True)
class ProblemDomain:
    """Endpoints a < c < b."""

    a: float
    c: float
    b: float

    @property
    def left_length(self) -> float:
        return self.c - self.a

    @property
    def right_length(self) -> float:
        return self.b - self.c


@dataclass(frozen=True)
class PieceCoefficients:
    """Piecewise constant p and per-piece potential evaluators.

    ``q_minus`` is used on the closed interval [a, c] with its value at c
    standing for the left limit q(c-); ``q_plus`` likewise on [c, b].
    """

    p_minus: float
    p_plus: float
    q_minus: Potential = field(default_factory=constant_potential)
    q_plus: Potential = field(default_factory=constant_potential)


@dataclass(frozen=True)
class BoundaryCoefficients:
    """Coefficients of the two eigenparameter-dependent boundary conditions."""

    alpha10: float
    alpha11: float
    alpha10p: float
    alpha11p: float
    alpha20: float
    alpha21: float
    alpha20p: float
    alpha21p: float

    @property
    def theta1(self) -> float:
        """Determinant of B0 = [[a11, a10], [a11', a10']]."""
        return self.alpha11 * self.alpha10p - self.alpha10 * self.alpha11p

    @property
    def theta2(self) -> float:
        """Determinant of B1 = [[a21, a20], [a21', a20']]."""
        return self.alpha21 * self.alpha20p - self.alpha20 * self.alpha21p

    @property
    def left_row(self) -> Tuple[float, float, float, float]:
        return (self.alpha10, self.alpha11, self.alpha10p, self.alpha11p)

    @property
    def right_row(self) -> Tuple[float, float, float, float]:
        return (self.alpha20, self.alpha21, self.alpha20p, self.alpha21p)

    @property
    def left_depends_on_lambda(self) -> bool:
        return self.alpha10p != 0.0 or self.alpha11p != 0.0

    @property
    def right_depends_on_lambda(self) -> bool:
        return self.alpha20p != 0.0 or self.alpha21p != 0.0


@dataclass(frozen=True)
class TransmissionCoefficients:
    """The 2x4 transmission matrix T and its 2x2 column minors."""

    beta: Tuple[Tuple[float, float, float, float], Tuple[float, float, float, float]]
    minors: Dict[Tuple[int, int], float] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(float(v) for v in row) for row in self.beta)
        if len(rows) != 2 or any(len(row) != 4 for row in rows):
            raise ProblemError("Transmission matrix must be 2x4")
        object.__setattr__(self, "beta", rows)
        minors = {}
        for k, j in MINOR_PAIRS:
            minors[(k, j)] = rows[0][k - 1] * rows[1][j - 1] - rows[0][j - 1] * rows[1][k - 1]
        object.__setattr__(self, "minors", minors)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "TransmissionCoefficients":
        return cls(tuple(tuple(row) for row in rows))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.beta, dtype=float)

    @property
    def minus_block(self) -> np.ndarray:
        """Columns acting on (y(c-), y'(c-))."""
        return self.matrix[:, 0:2]

    @property
    def plus_block(self) -> np.ndarray:
        """Columns acting on (y(c+), y'(c+))."""
        return self.matrix[:, 2:4]

    def delta(self, k: int, j: int) -> float:
        return delta(self, k, j)


def delta(tm: TransmissionCoefficients, k: int, j: int) -> float:
    """Determinant of columns k and j of T (1-based, k < j).

    Args:
        tm: Transmission coefficients
        k: First column index
        j: Second column index

    Returns:
        beta_1k * beta_2j - beta_1j * beta_2k

    Raises:
        IndexError: If the indices are out of range or k >= j
    """
    if not (1 <= k < j <= 4):
        raise IndexError(f"Minor indices must satisfy 1 <= k < j <= 4, got ({k}, {j})")
    return tm.minors[(k, j)]


class CaseTag(enum.Enum):
    """Zero pattern of (alpha11', alpha21')."""

    CASE_I = "i"     # a21' != 0, a11' != 0
    CASE_II = "ii"   # a21' != 0, a11' == 0
    CASE_III = "iii"  # a21' == 0, a11' != 0
    CASE_IV = "iv"   # a21' == 0, a11' == 0

    @property
    def left_primed_nonzero(self) -> bool:
        return self in (CaseTag.CASE_I, CaseTag.CASE_III)

    @property
    def right_primed_nonzero(self) -> bool:
        return self in (CaseTag.CASE_I, CaseTag.CASE_II)


@dataclass(frozen=True)
class AsymptoticCase:
    """Which of the four coefficient cases applies, and whether Delta24 vanishes."""

    tag: CaseTag
    degenerate_leading: bool


def classify(bc: BoundaryCoefficients, tm: TransmissionCoefficients,
             zero_tol: float = 0.0) -> AsymptoticCase:
    """Classify a problem into asymptotic cases (i)-(iv).

    Args:
        bc: Boundary coefficients
        tm: Transmission coefficients
        zero_tol: Magnitudes at or below this count as zero

    Returns:
        AsymptoticCase
    """
    left = abs(bc.alpha11p) > zero_tol
    right = abs(bc.alpha21p) > zero_tol
    if right and left:
        tag = CaseTag.CASE_I
    elif right:
        tag = CaseTag.CASE_II
    elif left:
        tag = CaseTag.CASE_III
    else:
        tag = CaseTag.CASE_IV
    return AsymptoticCase(tag=tag, degenerate_leading=abs(delta(tm, 2, 4)) <= zero_tol)


@dataclass(frozen=True)
class ProblemSpec:
    """Full description of a boundary-value-transmission problem."""

    domain: ProblemDomain
    coeffs: PieceCoefficients
    bc: BoundaryCoefficients
    tm: TransmissionCoefficients
    strict: bool = False
    name: str = ""


@dataclass(frozen=True)
class ValidatedProblem:
    """A ProblemSpec that passed validation, with derived data attached."""

    spec: ProblemSpec
    case: AsymptoticCase
    q_bound: float
    warnings: Tuple[str, ...] = ()

    @property
    def domain(self) -> ProblemDomain:
        return self.spec.domain

    @property
    def coeffs(self) -> PieceCoefficients:
        return self.spec.coeffs

    @property
    def bc(self) -> BoundaryCoefficients:
        return self.spec.bc

    @property
    def tm(self) -> TransmissionCoefficients:
        return self.spec.tm

    @property
    def name(self) -> str:
        return self.spec.name


def _sample_potential(q: Potential, lo: float, hi: float, points: int = 65) -> np.ndarray:
    xs = np.linspace(lo, hi, points)
    try:
        values = np.asarray(q(xs), dtype=float)
        if values.shape != xs.shape:
            values = np.broadcast_to(values, xs.shape).astype(float)
    except (TypeError, ValueError):
        values = np.array([float(q(float(x))) for x in xs])
    return values


def validate(spec: ProblemSpec, zero_tol: float = 0.0) -> ValidatedProblem:
    """Check the hard invariants of a problem and attach warnings.

    Args:
        spec: Problem description
        zero_tol: Zero tolerance for the asymptotic case classification

    Returns:
        ValidatedProblem

    Raises:
        DomainOrderError: If a < c < b fails
        NonpositiveP: If p_minus or p_plus is not positive
        SingularTransmission: If Delta12 or Delta34 is zero
        SignAssumptionError: In strict mode, if a sign assumption fails
        ProblemError: For all-zero boundary rows or non-finite data
    """
    dom, coeffs, bc, tm = spec.domain, spec.coeffs, spec.bc, spec.tm
    if not all(math.isfinite(v) for v in (dom.a, dom.c, dom.b)):
        raise ProblemError("Domain points must be finite")
    if not (dom.a < dom.c < dom.b):
        raise DomainOrderError(f"Need a < c < b, got a={dom.a}, c={dom.c}, b={dom.b}")
    if not (coeffs.p_minus > 0 and coeffs.p_plus > 0):
        raise NonpositiveP(f"p must be positive, got p-={coeffs.p_minus}, p+={coeffs.p_plus}")

    q_left = _sample_potential(coeffs.q_minus, dom.a, dom.c)
    q_right = _sample_potential(coeffs.q_plus, dom.c, dom.b)
    if not (np.all(np.isfinite(q_left)) and np.all(np.isfinite(q_right))):
        raise ProblemError("Potential must be finite on both closed pieces")

    for label, row in (("left", bc.left_row), ("right", bc.right_row)):
        if not all(math.isfinite(v) for v in row):
            raise ProblemError(f"Non-finite {label} boundary coefficient")
        if all(v == 0.0 for v in row):
            raise ProblemError(f"All {label} boundary coefficients are zero")
    if not all(math.isfinite(v) for row in tm.beta for v in row):
        raise ProblemError("Non-finite transmission coefficient")

    d12, d34 = delta(tm, 1, 2), delta(tm, 3, 4)
    if d12 == 0.0 or d34 == 0.0:
        raise SingularTransmission(f"Delta12={d12}, Delta34={d34}: interface map is singular")

    violations = []
    if bc.left_depends_on_lambda and not bc.theta1 > 0:
        violations.append(f"theta1={bc.theta1:g} is not positive")
    if bc.right_depends_on_lambda and not bc.theta2 > 0:
        violations.append(f"theta2={bc.theta2:g} is not positive")
    if not d12 > 0:
        violations.append(f"Delta12={d12:g} is not positive")
    if not d34 > 0:
        violations.append(f"Delta34={d34:g} is not positive")
    if violations and spec.strict:
        raise SignAssumptionError("; ".join(violations))
    for message in violations:
        logger.warning("%s: %s", spec.name or "problem", message)

    q_bound = float(max(np.max(np.abs(q_left)), np.max(np.abs(q_right))))
    return ValidatedProblem(
        spec=spec,
        case=classify(bc, tm, zero_tol),
        q_bound=q_bound,
        warnings=tuple(violations),
    )


def relative_residual(terms: Sequence[float]) -> float:
    """|sum(terms)| divided by sum(|terms|); 0 when every term is 0."""
    total = math.fsum(terms)
    scale = math.fsum(abs(t) for t in terms)
    if scale == 0.0:
        return 0.0
    return abs(total) / scale


def left_functional_terms(bc: BoundaryCoefficients, lam: float, y: float, dy: float) -> Tuple[float, ...]:
    return (bc.alpha10 * y, -bc.alpha11 * dy, -lam * bc.alpha10p * y, lam * bc.alpha11p * dy)


def right_functional_terms(bc: BoundaryCoefficients, lam: float, y: float, dy: float) -> Tuple[float, ...]:
    return (bc.alpha20 * y, -bc.alpha21 * dy, lam * bc.alpha20p * y, -lam * bc.alpha21p * dy)


def left_functional(bc: BoundaryCoefficients, lam: float, y: float, dy: float) -> float:
    """Value of V1 at the state (y(a), y'(a))."""
    return math.fsum(left_functional_terms(bc, lam, y, dy))


def right_functional(bc: BoundaryCoefficients, lam: float, y: float, dy: float) -> float:
    """Value of V2 at the state (y(b), y'(b))."""
    return math.fsum(right_functional_terms(bc, lam, y, dy))


def transmission_terms(tm: TransmissionCoefficients, minus: Tuple[float, float],
                       plus: Tuple[float, float]) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    values = (minus[0], minus[1], plus[0], plus[1])
    return tuple(tuple(row[i] * values[i] for i in range(4)) for row in tm.beta)


def transmission_residuals(tm: TransmissionCoefficients, minus: Tuple[float, float],
                           plus: Tuple[float, float], relative: bool = True) -> Tuple[float, float]:
    """Residuals of both transmission rows for one-sided states at c.

    Args:
        tm: Transmission coefficients
        minus: (y(c-), y'(c-))
        plus: (y(c+), y'(c+))
        relative: Divide each row by the sum of its absolute terms

    Returns:
        Pair of residuals, one per row
    """
    rows = transmission_terms(tm, minus, plus)
    if relative:
        return tuple(relative_residual(terms) for terms in rows)
    return tuple(abs(math.fsum(terms)) for terms in rows)
