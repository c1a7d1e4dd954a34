"""Leading-order asymptotics of fundamental solutions, w, eigenvalues and eigenfunctions.

All evaluations take mu = sqrt(lambda). With s1 = sin(mu (c-a)/sqrt(p-)),
c1 = cos(mu (c-a)/sqrt(p-)), s2, c2 the same on (c, b], the leading slopes
at the interface are

    phi-'(c) ~  a11' mu^3 s1 / sqrt(p-)       (a11' != 0)
    phi-'(c) ~ -a10' mu^2 c1                  (a11' == 0)
    psi+'(c) ~  a21' mu^3 s2 / sqrt(p+)       (a21' != 0)
    psi+'(c) ~  a20' mu^2 c2                  (a21' == 0)

and the continued pieces are driven by them through the jump maps:
phi+ ~ -(Delta24/Delta34) phi-'(c) cos(mu (x-c)/sqrt(p+)),
psi- ~ (Delta24/Delta12) psi+'(c) cos(mu (x-c)/sqrt(p-)), so that
w ~ -Delta24 phi-'(c) psi+'(c). Every leading term of
the continued pieces and of w carries Delta24.
"""

import enum
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateLeading, IndexTooSmall, PieceMismatch
from .logging_config import get_logger
from .model import AsymptoticCase, CaseTag, ValidatedProblem, delta

logger = get_logger(__name__)

# |trig factor| at or below this makes a displayed eigenfunction shape vanish.
SHAPE_DEGENERACY_TOL = 1e-9

# mu_{n,branch} = sqrt(p) * (slope * n + offset) * pi / (denominator * length)
_SEED_TABLE: Dict[CaseTag, Dict[int, Tuple[int, int, int]]] = {
    CaseTag.CASE_I: {1: (1, -3, 1), 2: (1, 0, 1)},
    CaseTag.CASE_II: {1: (2, 1, 2), 2: (1, -2, 1)},
    CaseTag.CASE_III: {1: (1, -2, 1), 2: (2, 1, 2)},
    CaseTag.CASE_IV: {1: (2, -3, 2), 2: (2, 1, 2)},
}


class Piece(enum.Enum):
    PHI_MINUS = "phi-"
    PHI_PLUS = "phi+"
    PSI_MINUS = "psi-"
    PSI_PLUS = "psi+"

    @property
    def on_left(self) -> bool:
        return self in (Piece.PHI_MINUS, Piece.PSI_MINUS)


@dataclass(frozen=True)
class AsymptoticSeed:
    """Leading-order eigenvalue estimate for index n on one branch."""

    n: int
    branch: int
    mu: float
    lam: float
    case: AsymptoticCase

    def __post_init__(self):
        if not self.mu > 0:
            raise IndexTooSmall(f"Seed mu must be positive, got {self.mu} for n={self.n}")


def _geometry(problem: ValidatedProblem) -> Tuple[float, float, float, float]:
    dom, coeffs = problem.domain, problem.coeffs
    return (dom.left_length, dom.right_length, math.sqrt(coeffs.p_minus), math.sqrt(coeffs.p_plus))


def _check_mu(mu: float) -> None:
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")


def _phi_minus_slope_at_c(problem: ValidatedProblem, mu: float) -> float:
    bc, case = problem.bc, problem.case
    left, _, sp, _ = _geometry(problem)
    if case.tag.left_primed_nonzero:
        return bc.alpha11p * mu ** 3 * math.sin(mu * left / sp) / sp
    if bc.alpha10p == 0.0:
        raise DegenerateLeading("a11' = a10' = 0: phi- has no lambda-dominated launch data")
    return -bc.alpha10p * mu ** 2 * math.cos(mu * left / sp)


def _psi_plus_slope_at_c(problem: ValidatedProblem, mu: float) -> float:
    bc, case = problem.bc, problem.case
    _, right, _, sq = _geometry(problem)
    if case.tag.right_primed_nonzero:
        return bc.alpha21p * mu ** 3 * math.sin(mu * right / sq) / sq
    if bc.alpha20p == 0.0:
        raise DegenerateLeading("a21' = a20' = 0: psi+ has no lambda-dominated launch data")
    return bc.alpha20p * mu ** 2 * math.cos(mu * right / sq)


def _require_delta24(problem: ValidatedProblem) -> float:
    d24 = delta(problem.tm, 2, 4)
    if problem.case.degenerate_leading:
        raise DegenerateLeading("Delta24=0: leading terms vanish")
    return d24


def _cos_term(omega: float, t: float, k: int, sign: float = 1.0) -> float:
    """k-th x-derivative of cos(omega * sign * t) where t is linear in x with slope sign."""
    if k == 0:
        return math.cos(omega * t)
    return -sign * omega * math.sin(omega * t)


def _sin_term(omega: float, t: float, k: int, sign: float = 1.0) -> float:
    if k == 0:
        return math.sin(omega * t)
    return sign * omega * math.cos(omega * t)


def asym_fundamental(problem: ValidatedProblem, which: Piece, k: int, x: float, mu: float) -> float:
    """Leading term of the k-th derivative of a fundamental-solution piece.

    Args:
        problem: Validated problem
        which: Piece.PHI_MINUS, PHI_PLUS, PSI_MINUS or PSI_PLUS
        k: Derivative order, 0 or 1
        x: Point on the piece of ``which``
        mu: Positive spectral root

    Returns:
        Leading term value

    Raises:
        PieceMismatch: If x lies outside the piece
        DegenerateLeading: If the leading coefficient vanishes for the problem
    """
    if k not in (0, 1):
        raise ValueError("k must be 0 or 1")
    _check_mu(mu)
    which = Piece(which)
    dom, bc = problem.domain, problem.bc
    lo, hi = (dom.a, dom.c) if which.on_left else (dom.c, dom.b)
    pad = 1e-12 * max(1.0, abs(lo), abs(hi))
    if not (lo - pad <= x <= hi + pad):
        raise PieceMismatch(f"x={x} is not on the {which.value} piece [{lo}, {hi}]")
    _, _, sp, sq = _geometry(problem)

    if which is Piece.PHI_MINUS:
        omega = mu / sp
        if problem.case.tag.left_primed_nonzero:
            return -bc.alpha11p * mu ** 2 * _cos_term(omega, x - dom.a, k)
        if bc.alpha10p == 0.0:
            raise DegenerateLeading("a11' = a10' = 0: phi- has no lambda-dominated launch data")
        return -bc.alpha10p * sp * mu * _sin_term(omega, x - dom.a, k)

    if which is Piece.PSI_PLUS:
        omega = mu / sq
        if problem.case.tag.right_primed_nonzero:
            return bc.alpha21p * mu ** 2 * _cos_term(omega, dom.b - x, k, sign=-1.0)
        if bc.alpha20p == 0.0:
            raise DegenerateLeading("a21' = a20' = 0: psi+ has no lambda-dominated launch data")
        return -bc.alpha20p * sq * mu * _sin_term(omega, dom.b - x, k, sign=-1.0)

    d24 = _require_delta24(problem)
    if which is Piece.PHI_PLUS:
        amplitude = -(d24 / delta(problem.tm, 3, 4)) * _phi_minus_slope_at_c(problem, mu)
        return amplitude * _cos_term(mu / sq, x - dom.c, k)
    amplitude = (d24 / delta(problem.tm, 1, 2)) * _psi_plus_slope_at_c(problem, mu)
    return amplitude * _cos_term(mu / sp, x - dom.c, k)


def asym_char(problem: ValidatedProblem, mu: float) -> float:
    """Leading term of w(mu) for the active case.

    Case (i):   -D a11' a21' mu^6 s1 s2 / (sqrt(p-) sqrt(p+))
    Case (ii):   D a10' a21' mu^5 c1 s2 / sqrt(p+)
    Case (iii): -D a11' a20' mu^5 s1 c2 / sqrt(p-)
    Case (iv):   D a10' a20' mu^4 c1 c2
    with D = Delta24.

    Raises:
        DegenerateLeading: If Delta24 = 0 or the dominant launch data vanish
    """
    _check_mu(mu)
    d24 = _require_delta24(problem)
    return -d24 * _phi_minus_slope_at_c(problem, mu) * _psi_plus_slope_at_c(problem, mu)


def seed_spacing(problem: ValidatedProblem, branch: int) -> float:
    """Distance between consecutive seeds of one branch."""
    left, right, sp, sq = _geometry(problem)
    if branch == 1:
        return sp * math.pi / left
    if branch == 2:
        return sq * math.pi / right
    raise ValueError(f"branch must be 1 or 2, got {branch}")


def min_index(problem: ValidatedProblem, branch: int) -> int:
    """Smallest n whose seed numerator is positive."""
    slope, offset, _ = _SEED_TABLE[problem.case.tag][branch]
    # smallest integer n with slope * n + offset > 0
    return max(1, (-offset) // slope + 1)


def asym_eigenvalue_seed(problem: ValidatedProblem, n: int, branch: int) -> AsymptoticSeed:
    """Leading-order eigenvalue mu_{n,branch} for the problem's case.

    Raises:
        IndexTooSmall: If n is below the smallest admissible index
    """
    if branch not in (1, 2):
        raise ValueError(f"branch must be 1 or 2, got {branch}")
    slope, offset, denominator = _SEED_TABLE[problem.case.tag][branch]
    numerator = slope * n + offset
    if numerator <= 0:
        raise IndexTooSmall(f"n={n} gives a non-positive seed on branch {branch}; "
                            f"need n >= {min_index(problem, branch)}")
    left, right, sp, sq = _geometry(problem)
    root_p, length = (sp, left) if branch == 1 else (sq, right)
    mu = root_p * numerator * math.pi / (denominator * length)
    return AsymptoticSeed(n=n, branch=branch, mu=mu, lam=mu * mu, case=problem.case)


def probe_mu(problem: ValidatedProblem, seed: AsymptoticSeed) -> float:
    """Off-zero probe point a quarter spacing above a seed."""
    return seed.mu + 0.25 * seed_spacing(problem, seed.branch)


def estimate_shift(seed_mus: Sequence[float], root_mus: Sequence[float], spacing: float) -> int:
    """Integer index shift between a seed lattice and the roots nearest to it.

    Args:
        seed_mus: Seed values of one branch
        root_mus: Refined roots (any order)
        spacing: Seed spacing of the branch

    Returns:
        Median of round((nearest root - seed) / spacing); 0 when nothing matches
    """
    roots = np.sort(np.asarray(root_mus, dtype=float))
    if roots.size == 0 or len(seed_mus) == 0:
        return 0
    offsets = []
    for seed in seed_mus:
        idx = int(np.argmin(np.abs(roots - seed)))
        offsets.append(round((roots[idx] - seed) / spacing))
    return int(np.median(offsets))


def _interface_factor(problem: ValidatedProblem, mu: float) -> float:
    """Trig factor the interface passes on to phi+ at this mu."""
    left, _, sp, _ = _geometry(problem)
    if problem.case.tag.left_primed_nonzero:
        return math.sin(mu * left / sp)
    return math.cos(mu * left / sp)


def asym_eigenfunction(problem: ValidatedProblem, n: int, branch: int, x: float,
                       side: Optional[str] = None) -> float:
    """Leading shape of the n-th eigenfunction of a branch at x.

    The shape is phi-/phi+ evaluated at the seed mu_{n,branch}.

    Args:
        problem: Validated problem
        n: Eigenvalue index
        branch: 1 or 2
        x: Point in [a, b]
        side: "left" or "right"; needed only at x == c, defaults to left there

    Returns:
        Leading shape value

    Raises:
        DegenerateLeading: If the displayed leading coefficient vanishes
    """
    dom = problem.domain
    if not (dom.a <= x <= dom.b):
        raise PieceMismatch(f"x={x} is outside [{dom.a}, {dom.b}]")
    if side is None:
        side = "left" if x <= dom.c else "right"
    seed = asym_eigenvalue_seed(problem, n, branch)
    if side == "left":
        return asym_fundamental(problem, Piece.PHI_MINUS, 0, x, seed.mu)
    factor = _interface_factor(problem, seed.mu)
    if abs(factor) <= SHAPE_DEGENERACY_TOL:
        raise DegenerateLeading(
            f"n={n}, branch {branch}: interface factor {factor:.2e} vanishes at the seed; "
            "the continued-piece leading term is zero")
    return asym_fundamental(problem, Piece.PHI_PLUS, 0, x, seed.mu)
