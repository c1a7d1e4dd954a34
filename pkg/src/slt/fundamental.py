"""Fundamental solutions phi (launched at a) and psi (launched at b).

phi starts from the initial data that makes V1 vanish identically, is
integrated to c, carried across the interface by the exact 2x2 jump map,
and continued to b. psi is the mirror image. The interface maps come from
solving both transmission rows directly as a 2x2 linear system.
"""

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import DEFAULT_SETTINGS, SolverSettings
from .errors import SingularTransmission
from .integrate import PhaseState, Trajectory, ivp_solve
from .logging_config import get_logger
from .model import (
    BoundaryCoefficients,
    TransmissionCoefficients,
    ValidatedProblem,
    delta,
    left_functional_terms,
    relative_residual,
    right_functional_terms,
    transmission_residuals,
)

logger = get_logger(__name__)


class SolutionKind(enum.Enum):
    PHI = "phi"
    PSI = "psi"


@dataclass(frozen=True)
class FundamentalSolution:
    """Piecewise solution with both pieces and the interface jump.

    For phi the launch side of c is c- and the continued side is c+;
    for psi it is the other way round.
    """

    kind: SolutionKind
    lam: float
    left: Trajectory
    right: Trajectory
    jump_in: PhaseState
    jump_out: PhaseState

    @property
    def minus_state(self) -> PhaseState:
        """(y(c-), y'(c-))."""
        return self.jump_in if self.kind is SolutionKind.PHI else self.jump_out

    @property
    def plus_state(self) -> PhaseState:
        """(y(c+), y'(c+))."""
        return self.jump_out if self.kind is SolutionKind.PHI else self.jump_in

    @property
    def at_a(self) -> PhaseState:
        return self.left.start if self.kind is SolutionKind.PHI else self.left.end

    @property
    def at_b(self) -> PhaseState:
        return self.right.end if self.kind is SolutionKind.PHI else self.right.start

    def evaluate(self, x, side: str) -> Tuple[np.ndarray, np.ndarray]:
        """Evaluate (y, y') on the ``"left"`` or ``"right"`` piece."""
        if side == "left":
            return self.left(x)
        if side == "right":
            return self.right(x)
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    def transmission_residuals(self, tm: TransmissionCoefficients) -> Tuple[float, float]:
        return transmission_residuals(tm, self.minus_state.as_tuple(), self.plus_state.as_tuple())


def left_initial_phi(bc: BoundaryCoefficients, lam: float) -> PhaseState:
    """Initial data at a that satisfies V1 for every lambda."""
    return PhaseState(bc.alpha11 - lam * bc.alpha11p, bc.alpha10 - lam * bc.alpha10p)


def right_initial_psi(bc: BoundaryCoefficients, lam: float) -> PhaseState:
    """Initial data at b that satisfies V2 for every lambda."""
    return PhaseState(bc.alpha21 + lam * bc.alpha21p, bc.alpha20 + lam * bc.alpha20p)


def transmit_left_to_right(tm: TransmissionCoefficients, state_minus: PhaseState) -> PhaseState:
    """Map (y(c-), y'(c-)) to the unique (y(c+), y'(c+)) satisfying both rows.

    Raises:
        SingularTransmission: If Delta34 is zero
    """
    if delta(tm, 3, 4) == 0.0:
        raise SingularTransmission("Delta34 = 0: the plus block of T is singular")
    rhs = -tm.minus_block @ np.array(state_minus.as_tuple())
    y, dy = np.linalg.solve(tm.plus_block, rhs)
    return PhaseState(float(y), float(dy))


def transmit_right_to_left(tm: TransmissionCoefficients, state_plus: PhaseState) -> PhaseState:
    """Map (y(c+), y'(c+)) to the unique (y(c-), y'(c-)) satisfying both rows.

    Raises:
        SingularTransmission: If Delta12 is zero
    """
    if delta(tm, 1, 2) == 0.0:
        raise SingularTransmission("Delta12 = 0: the minus block of T is singular")
    rhs = -tm.plus_block @ np.array(state_plus.as_tuple())
    y, dy = np.linalg.solve(tm.minus_block, rhs)
    return PhaseState(float(y), float(dy))


def transmit_batch(tm: TransmissionCoefficients, states: np.ndarray, left_to_right: bool) -> np.ndarray:
    """Vectorized interface map for an (N, 2) array of one-sided states."""
    states = np.asarray(states, dtype=float)
    if left_to_right:
        source, target, singular = tm.minus_block, tm.plus_block, delta(tm, 3, 4)
    else:
        source, target, singular = tm.plus_block, tm.minus_block, delta(tm, 1, 2)
    if singular == 0.0:
        raise SingularTransmission("Interface map is singular")
    return np.linalg.solve(target, -source @ states.T).T


def _warn_trivial(kind: str, state: PhaseState, lam: float) -> None:
    if state.y == 0.0 and state.dy == 0.0:
        logger.warning("%s launch data vanish at lambda=%g; the solution is identically zero", kind, lam)


def build_phi(problem: ValidatedProblem, lam: float, tol: Optional[float] = None,
              settings: SolverSettings = DEFAULT_SETTINGS) -> FundamentalSolution:
    """Build phi: launch at a, integrate to c, jump, integrate to b.

    Args:
        problem: Validated problem
        lam: Spectral parameter
        tol: Integrator tolerance; defaults to settings.ivp_tol
        settings: Solver settings

    Returns:
        FundamentalSolution of kind PHI
    """
    dom, coeffs = problem.domain, problem.coeffs
    start = left_initial_phi(problem.bc, lam)
    _warn_trivial("phi", start, lam)
    left = ivp_solve(coeffs.p_minus, coeffs.q_minus, lam, dom.a, start, dom.c, tol, settings)
    minus = left.end
    plus = transmit_left_to_right(problem.tm, minus)
    right = ivp_solve(coeffs.p_plus, coeffs.q_plus, lam, dom.c, plus, dom.b, tol, settings)
    return FundamentalSolution(SolutionKind.PHI, lam, left, right, minus, plus)


def build_psi(problem: ValidatedProblem, lam: float, tol: Optional[float] = None,
              settings: SolverSettings = DEFAULT_SETTINGS) -> FundamentalSolution:
    """Build psi: launch at b, integrate to c, jump, integrate to a.

    Args:
        problem: Validated problem
        lam: Spectral parameter
        tol: Integrator tolerance; defaults to settings.ivp_tol
        settings: Solver settings

    Returns:
        FundamentalSolution of kind PSI
    """
    dom, coeffs = problem.domain, problem.coeffs
    start = right_initial_psi(problem.bc, lam)
    _warn_trivial("psi", start, lam)
    right = ivp_solve(coeffs.p_plus, coeffs.q_plus, lam, dom.b, start, dom.c, tol, settings)
    plus = right.end
    minus = transmit_right_to_left(problem.tm, plus)
    left = ivp_solve(coeffs.p_minus, coeffs.q_minus, lam, dom.c, minus, dom.a, tol, settings)
    return FundamentalSolution(SolutionKind.PSI, lam, left, right, plus, minus)


def boundary_residuals(problem: ValidatedProblem, solution: FundamentalSolution) -> Tuple[float, float]:
    """Relative residuals of V1 and V2 on a fundamental solution."""
    lam = solution.lam
    at_a, at_b = solution.at_a, solution.at_b
    return (relative_residual(left_functional_terms(problem.bc, lam, at_a.y, at_a.dy)),
            relative_residual(right_functional_terms(problem.bc, lam, at_b.y, at_b.dy)))
