"""Characteristic function w(lambda) = Delta12 * W[phi-, psi-] = Delta34 * W[phi+, psi+].

Eigenvalues are exactly the zeros of w. ``char_eval`` builds both
fundamental solutions and evaluates the Wronskian on each piece, which
gives a two-sided consistency check. ``char_values`` is the cheap path
used by scans and root refinement: it integrates only phi- and psi+ and
evaluates the left Wronskian at c, which equals its value at a.

The jump map at c has determinant Delta12/Delta34, so W[phi+, psi+] =
(Delta12/Delta34) W[phi-, psi-]; that fixes which minor goes with which side.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_SETTINGS, SolverSettings
from .errors import ConsistencyError, NumericalError
from .fundamental import (
    FundamentalSolution,
    build_phi,
    build_psi,
    left_initial_phi,
    right_initial_psi,
    transmit_batch,
)
from .integrate import shoot_batch
from .logging_config import get_logger
from .model import ValidatedProblem, delta

logger = get_logger(__name__)

CONSISTENCY_FLOOR = 1e-300


@dataclass(frozen=True)
class CharSample:
    """One evaluation of the characteristic function.

    Attributes:
        lam: Spectral parameter lambda
        w_minus: Wronskian of phi-, psi- on the left piece, taken at a
        w_plus: Wronskian of phi+, psi+ on the right piece, taken at b
        w: Canonical value Delta12 * w_minus
        consistency: |Delta12 w_minus - Delta34 w_plus| / max(|Delta12 w_minus|, |Delta34 w_plus|, floor)
        scale: Size of the Wronskian products before cancellation, times the minors
        scaled_defect: |Delta12 w_minus - Delta34 w_plus| / scale
    """

    lam: float
    w_minus: float
    w_plus: float
    w: float
    consistency: float
    scale: float
    scaled_defect: float

    @property
    def mu(self) -> Optional[float]:
        return math.sqrt(self.lam) if self.lam >= 0 else None


def _wronskian(u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Row-wise Wronskian u v' - u' v of (N, 2) states and the size of its two products."""
    first, second = u[:, 0] * v[:, 1], u[:, 1] * v[:, 0]
    return first - second, np.abs(first) + np.abs(second)


def _samples(problem: ValidatedProblem, lams: np.ndarray, phi_a: np.ndarray, psi_a: np.ndarray,
             phi_b: np.ndarray, psi_b: np.ndarray) -> List[CharSample]:
    d12, d34 = delta(problem.tm, 1, 2), delta(problem.tm, 3, 4)
    w_minus, size_minus = _wronskian(phi_a, psi_a)
    w_plus, size_plus = _wronskian(phi_b, psi_b)
    left_side, right_side = d12 * w_minus, d34 * w_plus
    gap = np.abs(left_side - right_side)
    consistency = gap / np.maximum(np.maximum(np.abs(left_side), np.abs(right_side)), CONSISTENCY_FLOOR)
    scale = np.maximum(abs(d12) * size_minus, abs(d34) * size_plus)
    defect = gap / np.maximum(scale, CONSISTENCY_FLOOR)
    return [
        CharSample(float(lams[i]), float(w_minus[i]), float(w_plus[i]), float(left_side[i]),
                   float(consistency[i]), float(scale[i]), float(defect[i]))
        for i in range(lams.size)
    ]


def sample_from_solutions(problem: ValidatedProblem, phi: FundamentalSolution,
                          psi: FundamentalSolution) -> CharSample:
    """Assemble a CharSample from already built phi and psi at the same lambda."""
    def row(state):
        return np.array([state.as_tuple()])

    return _samples(problem, np.array([phi.lam]), row(phi.at_a), row(psi.at_a),
                    row(phi.at_b), row(psi.at_b))[0]


def char_samples(problem: ValidatedProblem, lambdas: Sequence[float],
                 tol: Optional[float] = None,
                 settings: SolverSettings = DEFAULT_SETTINGS) -> List[CharSample]:
    """Two-sided samples for many lambda values without dense output.

    All four pieces are shot as vectorized batches; w- is taken at a and
    w+ at b, so the two sides come from independent integrations.

    Returns:
        One CharSample per lambda, in input order
    """
    lams = np.asarray(lambdas, dtype=float).ravel()
    if lams.size == 0:
        return []
    dom, coeffs, bc, tm = problem.domain, problem.coeffs, problem.bc, problem.tm
    phi_a = np.array([left_initial_phi(bc, lam).as_tuple() for lam in lams])
    psi_b = np.array([right_initial_psi(bc, lam).as_tuple() for lam in lams])
    phi_minus_c = shoot_batch(coeffs.p_minus, coeffs.q_minus, lams, dom.a, phi_a, dom.c, tol, settings)
    phi_plus_c = transmit_batch(tm, phi_minus_c, left_to_right=True)
    phi_b = shoot_batch(coeffs.p_plus, coeffs.q_plus, lams, dom.c, phi_plus_c, dom.b, tol, settings)
    psi_plus_c = shoot_batch(coeffs.p_plus, coeffs.q_plus, lams, dom.b, psi_b, dom.c, tol, settings)
    psi_minus_c = transmit_batch(tm, psi_plus_c, left_to_right=False)
    psi_a = shoot_batch(coeffs.p_minus, coeffs.q_minus, lams, dom.c, psi_minus_c, dom.a, tol, settings)
    return _samples(problem, lams, phi_a, psi_a, phi_b, psi_b)


def char_eval(problem: ValidatedProblem, lam: float, tol: Optional[float] = None,
              settings: SolverSettings = DEFAULT_SETTINGS) -> CharSample:
    """Evaluate w(lambda) from both pieces.

    A sample is rejected when its relative defect ``consistency`` exceeds
    ``settings.consistency_tol``. Next to an eigenvalue both sides shrink
    into rounding noise and the relative defect loses meaning; there the
    sample is kept as long as ``scaled_defect`` (the gap measured against
    the size of the Wronskian products) stays within the same tolerance.

    Args:
        problem: Validated problem
        lam: Spectral parameter
        tol: Integrator tolerance
        settings: Solver settings

    Returns:
        CharSample

    Raises:
        ConsistencyError: If consistency and scaled_defect both exceed
            settings.consistency_tol
    """
    phi = build_phi(problem, lam, tol, settings)
    psi = build_psi(problem, lam, tol, settings)
    sample = sample_from_solutions(problem, phi, psi)
    limit = settings.consistency_tol
    if sample.consistency > limit and sample.scaled_defect > limit:
        raise ConsistencyError(
            f"lambda={lam:g}: Delta12*w- and Delta34*w+ disagree "
            f"(relative {sample.consistency:.3e}, scaled {sample.scaled_defect:.3e})")
    return sample


def char_at_a(problem: ValidatedProblem, lam: float,
              psi: Optional[FundamentalSolution] = None,
              settings: SolverSettings = DEFAULT_SETTINGS) -> float:
    """Evaluate w at x = a with phi(a), phi'(a) taken from the launch data.

    Uses the Wronskian expansion
    ``Delta12 * [(a11 - lam a11') psi-'(a) - (a10 - lam a10') psi-(a)]``.

    Args:
        problem: Validated problem
        lam: Spectral parameter
        psi: psi already built at lam; built here when omitted
        settings: Solver settings

    Returns:
        w(lambda)
    """
    if psi is None:
        psi = build_psi(problem, lam, settings=settings)
    start = left_initial_phi(problem.bc, lam)
    at_a = psi.at_a
    return delta(problem.tm, 1, 2) * (start.y * at_a.dy - start.dy * at_a.y)


def char_values(problem: ValidatedProblem, lambdas: Sequence[float],
                tol: Optional[float] = None,
                settings: SolverSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """Evaluate w for many lambda values on the cheap path.

    phi- and psi+ are shot to c in one vectorized integration each; psi+
    is mapped across the interface and the left Wronskian is taken at c.

    Args:
        problem: Validated problem
        lambdas: Spectral parameters
        tol: Integrator tolerance
        settings: Solver settings

    Returns:
        Array of w values, same length as lambdas
    """
    lams = np.asarray(lambdas, dtype=float).ravel()
    if lams.size == 0:
        return np.zeros(0)
    dom, coeffs, bc = problem.domain, problem.coeffs, problem.bc
    phi_start = np.array([left_initial_phi(bc, lam).as_tuple() for lam in lams])
    psi_start = np.array([right_initial_psi(bc, lam).as_tuple() for lam in lams])
    phi_c = shoot_batch(coeffs.p_minus, coeffs.q_minus, lams, dom.a, phi_start, dom.c, tol, settings)
    psi_c_plus = shoot_batch(coeffs.p_plus, coeffs.q_plus, lams, dom.b, psi_start, dom.c, tol, settings)
    psi_c = transmit_batch(problem.tm, psi_c_plus, left_to_right=False)
    w_minus = phi_c[:, 0] * psi_c[:, 1] - phi_c[:, 1] * psi_c[:, 0]
    return delta(problem.tm, 1, 2) * w_minus


def char_value(problem: ValidatedProblem, lam: float, tol: Optional[float] = None,
               settings: SolverSettings = DEFAULT_SETTINGS) -> float:
    """Single-lambda form of char_values."""
    return float(char_values(problem, [lam], tol, settings)[0])


def wronskian_profile(problem: ValidatedProblem, lam: float, points: int = 11,
                      tol: Optional[float] = None,
                      settings: SolverSettings = DEFAULT_SETTINGS
                      ) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, float]:
    """Sample W[phi, psi] at equispaced points of each piece.

    Returns:
        (x_left, w_left, x_right, w_right, scale) where scale is the largest
        Wronskian product magnitude seen
    """
    dom = problem.domain
    phi = build_phi(problem, lam, tol, settings)
    psi = build_psi(problem, lam, tol, settings)
    x_left = np.linspace(dom.a, dom.c, points)
    x_right = np.linspace(dom.c, dom.b, points)
    profiles: List[np.ndarray] = []
    scale = 0.0
    for side, xs in (("left", x_left), ("right", x_right)):
        u, du = phi.evaluate(xs, side)
        v, dv = psi.evaluate(xs, side)
        profiles.append(u * dv - du * v)
        scale = max(scale, float(np.max(np.abs(u * dv) + np.abs(du * v))))
    return x_left, profiles[0], x_right, profiles[1], scale


def char_grid(problem: ValidatedProblem, lambdas: Sequence[float],
              settings: SolverSettings = DEFAULT_SETTINGS) -> List[Optional[CharSample]]:
    """Full two-sided evaluation on a grid; failed nodes come back as None."""
    samples: List[Optional[CharSample]] = []
    for lam in lambdas:
        try:
            samples.append(char_eval(problem, float(lam), settings=settings))
        except NumericalError as exc:
            logger.warning("char_eval failed at lambda=%g: %s", lam, exc)
            samples.append(None)
    return samples
