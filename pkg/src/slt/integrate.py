"""Single-piece integration of -p y'' + q y = lambda y.

The engine works in lambda (never in mu = sqrt(lambda)), so negative
lambda needs no complex arithmetic. ``ivp_solve`` runs an adaptive
embedded Runge-Kutta pair from scipy and wraps the accepted steps in a
Trajectory with cubic Hermite dense output. ``picard_solution`` is an
independent oracle: fixed-point iteration of the variation-of-parameters
Volterra equation on a trapezoid grid.
"""

import math
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from .config import DEFAULT_SETTINGS, SolverSettings
from .errors import NonConvergence, NonFiniteState, NumericalError, PieceMismatch, StepSizeUnderflow
from .logging_config import get_logger
from .model import Potential

logger = get_logger(__name__)

BaseTerm = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]

_PICARD_BURN_IN = 3
_PICARD_FLOOR = 1e-13
# Largest phase advance between dense-output nodes; keeps the cubic Hermite
# relative error near 1e-10.
DENSE_PHASE_STEP = 0.02


@dataclass(frozen=True)
class PhaseState:
    """The pair (y, y') at a point."""

    y: float
    dy: float

    def __post_init__(self):
        if not (math.isfinite(self.y) and math.isfinite(self.dy)):
            raise NonFiniteState(f"Non-finite phase state ({self.y}, {self.dy})")

    def __iter__(self) -> Iterator[float]:
        yield self.y
        yield self.dy

    def as_tuple(self) -> Tuple[float, float]:
        return (self.y, self.dy)


def evaluate_potential(q: Potential, xs: np.ndarray) -> np.ndarray:
    """Evaluate q on an array, falling back to a loop for scalar-only callables."""
    xs = np.asarray(xs, dtype=float)
    try:
        values = np.asarray(q(xs), dtype=float)
        if values.shape != xs.shape:
            values = np.broadcast_to(values, xs.shape).astype(float)
        return values
    except (TypeError, ValueError):
        return np.array([float(q(float(x))) for x in xs.ravel()]).reshape(xs.shape)


class Trajectory:
    """Sampled solution on one piece with cubic Hermite dense output.

    Samples are stored in integration order, so ``xs[0] == x0`` and
    ``xs[-1] == x1`` whichever direction the integration ran.
    """

    def __init__(self, xs: np.ndarray, ys: np.ndarray, dys: np.ndarray,
                 p: float, q: Potential, lam: float):
        """Initialize trajectory.

        Args:
            xs: Strictly monotone sample abscissae, first is x0, last is x1
            ys: Solution values at xs
            dys: First derivatives at xs
            p: Constant p of the piece
            q: Potential of the piece
            lam: Spectral parameter
        """
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        dys = np.asarray(dys, dtype=float)
        if xs.size < 2:
            raise ValueError("A trajectory needs at least two samples")
        steps = np.diff(xs)
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValueError("Trajectory samples must be strictly ordered")
        if not (np.all(np.isfinite(ys)) and np.all(np.isfinite(dys))):
            raise NonFiniteState("Trajectory contains non-finite samples")
        self.xs, self.ys, self.dys = xs, ys, dys
        self.p, self.q, self.lam = float(p), q, float(lam)

        order = np.argsort(xs)
        sx, sy, sdy = xs[order], ys[order], dys[order]
        ddy = (evaluate_potential(q, sx) - self.lam) * sy / self.p
        self._sorted_xs = sx
        self._sorted_ys = sy
        self._sorted_dys = sdy
        self._value = CubicHermiteSpline(sx, sy, sdy, extrapolate=False)
        self._slope = CubicHermiteSpline(sx, sdy, ddy, extrapolate=False)

    @property
    def x0(self) -> float:
        return float(self.xs[0])

    @property
    def x1(self) -> float:
        return float(self.xs[-1])

    @property
    def piece(self) -> Tuple[float, float]:
        return (self.x0, self.x1)

    @property
    def start(self) -> PhaseState:
        return PhaseState(float(self.ys[0]), float(self.dys[0]))

    @property
    def end(self) -> PhaseState:
        return PhaseState(float(self.ys[-1]), float(self.dys[-1]))

    @property
    def samples(self) -> List[Tuple[float, PhaseState]]:
        return [(float(x), PhaseState(float(y), float(dy)))
                for x, y, dy in zip(self.xs, self.ys, self.dys)]

    def __len__(self) -> int:
        return int(self.xs.size)

    def contains(self, x: float, slack: float = 1e-12) -> bool:
        lo, hi = self._sorted_xs[0], self._sorted_xs[-1]
        pad = slack * max(1.0, abs(lo), abs(hi))
        return lo - pad <= x <= hi + pad

    def __call__(self, x) -> Tuple[np.ndarray, np.ndarray]:
        """Evaluate (y, y') anywhere on the piece.

        Raises:
            PieceMismatch: If a point lies outside the piece
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        lo, hi = self._sorted_xs[0], self._sorted_xs[-1]
        pad = 1e-12 * max(1.0, abs(lo), abs(hi))
        if np.any(x < lo - pad) or np.any(x > hi + pad):
            raise PieceMismatch(f"Points outside piece [{lo}, {hi}]")
        x = np.clip(x, lo, hi)
        ys = self._value(x)
        dys = self._slope(x)
        # nodes come back exactly
        idx = np.clip(np.searchsorted(self._sorted_xs, x), 0, self._sorted_xs.size - 1)
        hit = self._sorted_xs[idx] == x
        ys[hit] = self._sorted_ys[idx[hit]]
        dys[hit] = self._sorted_dys[idx[hit]]
        return ys, dys

    def state_at(self, x: float) -> PhaseState:
        ys, dys = self(x)
        return PhaseState(float(ys[0]), float(dys[0]))


def _settings_tol(tol: Optional[float], settings: SolverSettings) -> float:
    tol = settings.ivp_tol if tol is None else tol
    if not tol > 0:
        raise ValueError("tol must be positive")
    return tol


def _solve(rhs, x0: float, x1: float, u0: Sequence[float], tol: float,
           settings: SolverSettings, dense: bool = False):
    options = {}
    if settings.max_step is not None:
        options["max_step"] = settings.max_step
    sol = solve_ivp(rhs, (x0, x1), u0, method=settings.ivp_method,
                    rtol=tol, atol=tol, dense_output=dense, **options)
    if sol.status != 0:
        message = str(sol.message)
        if "step size" in message.lower():
            raise StepSizeUnderflow(f"Integration from {x0} to {x1} failed: {message}")
        raise NumericalError(f"Integration from {x0} to {x1} failed: {message}")
    if not np.all(np.isfinite(sol.y)):
        raise NonFiniteState(f"Integration from {x0} to {x1} produced non-finite values")
    logger.debug("solve_ivp %s [%g, %g]: %d steps, %d rhs evaluations",
                 settings.ivp_method, x0, x1, sol.t.size - 1, sol.nfev)
    return sol


def _dense_nodes(steps: np.ndarray, p: float, q: Potential,
                 lam: float) -> Tuple[np.ndarray, np.ndarray]:
    """Subdivide accepted steps so each gap spans at most DENSE_PHASE_STEP radians.

    Returns the nodes and the positions of the original steps among them.
    """
    omega = math.sqrt(float(np.max(np.abs(lam - evaluate_potential(q, steps)))) / p)
    gaps = np.abs(np.diff(steps))
    counts = np.maximum(1, np.ceil(gaps * omega / DENSE_PHASE_STEP).astype(int))
    positions = np.concatenate(([0], np.cumsum(counts)))
    if np.all(counts == 1):
        return steps, positions
    pieces = [np.linspace(lo, hi, n, endpoint=False) for lo, hi, n in zip(steps[:-1], steps[1:], counts)]
    pieces.append(steps[-1:])
    return np.concatenate(pieces), positions


def ivp_solve(p: float, q: Potential, lam: float, x0: float, state0: PhaseState,
              x1: float, tol: Optional[float] = None,
              settings: SolverSettings = DEFAULT_SETTINGS) -> Trajectory:
    """Integrate one piece from x0 to x1.

    Args:
        p: Positive constant p of the piece
        q: Potential evaluator of the piece
        lam: Spectral parameter lambda
        x0: Start point
        state0: (y, y') at x0
        x1: End point, on either side of x0
        tol: Local error tolerance; defaults to settings.ivp_tol
        settings: Solver settings

    Returns:
        Trajectory whose last sample sits exactly at x1

    Raises:
        StepSizeUnderflow: If the step size collapses
        NonFiniteState: If the solution blows up
    """
    if x0 == x1:
        raise ValueError("x0 and x1 must differ")
    if not p > 0:
        raise ValueError("p must be positive")
    tol = _settings_tol(tol, settings)
    inv_p = 1.0 / p

    def rhs(x, u):
        return [u[1], (q(x) - lam) * u[0] * inv_p]

    sol = _solve(rhs, x0, x1, [state0.y, state0.dy], tol, settings, dense=True)
    steps = sol.t.copy()
    steps[-1] = x1
    xs, positions = _dense_nodes(steps, p, q, lam)
    values = sol.sol(xs)
    # accepted steps keep the integrator values
    values[:, positions] = sol.y
    return Trajectory(xs, values[0], values[1], p, q, lam)


def shoot_batch(p: float, q: Potential, lambdas: Sequence[float], x0: float,
                states0: np.ndarray, x1: float, tol: Optional[float] = None,
                settings: SolverSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """Integrate many lambda values over one piece together.

    Only endpoint states are returned. The step size follows the most
    oscillatory member of the batch.

    Args:
        p: Positive constant p of the piece
        q: Potential evaluator of the piece
        lambdas: Spectral parameters, shape (N,)
        x0: Start point
        states0: Initial (y, y') per lambda, shape (N, 2)
        x1: End point
        tol: Local error tolerance
        settings: Solver settings

    Returns:
        Array of shape (N, 2) with (y, y') at x1
    """
    lams = np.asarray(lambdas, dtype=float)
    states0 = np.asarray(states0, dtype=float).reshape(lams.size, 2)
    if lams.size == 0:
        return np.zeros((0, 2))
    tol = _settings_tol(tol, settings)
    n = lams.size
    inv_p = 1.0 / p

    def rhs(x, u):
        return np.concatenate((u[n:], (q(x) - lams) * u[:n] * inv_p))

    u0 = np.concatenate((states0[:, 0], states0[:, 1]))
    sol = _solve(rhs, x0, x1, u0, tol, settings)
    end = sol.y[:, -1]
    return np.column_stack((end[:n], end[n:]))


def free_solution(state0: PhaseState, p: float, lam: float, x0: float,
                  x) -> Tuple[np.ndarray, np.ndarray]:
    """Closed-form solution of -p y'' = lambda y through state0 at x0.

    Covers lambda > 0 (trigonometric), lambda = 0 (linear) and lambda < 0
    (hyperbolic).

    Returns:
        (y, y') evaluated at x
    """
    t = np.asarray(x, dtype=float) - x0
    y0, dy0 = state0.y, state0.dy
    if lam > 0:
        w = math.sqrt(lam / p)
        return (y0 * np.cos(w * t) + dy0 * np.sin(w * t) / w,
                -y0 * w * np.sin(w * t) + dy0 * np.cos(w * t))
    if lam < 0:
        w = math.sqrt(-lam / p)
        return (y0 * np.cosh(w * t) + dy0 * np.sinh(w * t) / w,
                y0 * w * np.sinh(w * t) + dy0 * np.cosh(w * t))
    return y0 + dy0 * t, dy0 + 0.0 * t


def trig_base(state0: PhaseState, p: float, lam: float, x0: float) -> BaseTerm:
    """Base term of the integral equation launched from state0 at x0.

    ``A cos(mu (x - x0)/sqrt(p)) + B sqrt(p)/mu sin(mu (x - x0)/sqrt(p))``
    with (A, B) = state0, returned as a callable giving value and derivative.
    """
    if not lam > 0:
        raise ValueError("The trigonometric base term needs lambda > 0")

    def base(xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return free_solution(state0, p, lam, x0, xs)

    return base


def picard_solution(p: float, q: Potential, lam: float, base: BaseTerm, x0: float,
                    x1: float, iterations: int = 30, grid: int = 2001) -> Trajectory:
    """Solve the piece by Picard iteration of the Volterra integral equation.

    The iterated map is

        y(x)  = base(x)  + 1/(mu sqrt(p)) int_{x0}^{x} sin(mu (x - z)/sqrt(p)) q(z) y(z) dz
        y'(x) = base'(x) + 1/p            int_{x0}^{x} cos(mu (x - z)/sqrt(p)) q(z) y(z) dz

    with mu = sqrt(lambda), discretized by the composite trapezoid rule on a
    uniform grid. The integral is oriented, so x1 < x0 is allowed.

    Args:
        p: Positive constant p
        q: Potential evaluator
        lam: Spectral parameter, must be positive
        base: Callable returning the base term and its derivative on an array
        x0: Launch point
        x1: End point
        iterations: Maximum number of Picard sweeps
        grid: Number of grid nodes

    Returns:
        Trajectory sampled on the grid

    Raises:
        ValueError: If lambda <= 0, iterations < 1 or grid < 2
        NonConvergence: If the sweep differences stop decreasing
    """
    if not lam > 0:
        raise ValueError("picard_solution needs lambda > 0 (the kernel divides by mu)")
    if iterations < 1 or grid < 2:
        raise ValueError("Need iterations >= 1 and grid >= 2")
    if x0 == x1:
        raise ValueError("x0 and x1 must differ")

    mu = math.sqrt(lam)
    omega = mu / math.sqrt(p)
    xs = np.linspace(x0, x1, grid)
    h = (x1 - x0) / (grid - 1)

    weights = np.tril(np.full((grid, grid), h))
    weights[:, 0] *= 0.5
    weights[np.diag_indices(grid)] *= 0.5
    weights[0, 0] = 0.0

    qz = evaluate_potential(q, xs)
    phase = omega * (xs[:, None] - xs[None, :])
    kernel = weights * np.sin(phase) * (qz / (mu * math.sqrt(p)))[None, :]
    kernel_dx = weights * np.cos(phase) * (qz / p)[None, :]

    base_y, base_dy = base(xs)
    base_y = np.asarray(base_y, dtype=float)
    base_dy = np.asarray(base_dy, dtype=float)
    y, dy = base_y.copy(), base_dy.copy()
    previous = math.inf
    for k in range(1, iterations):
        y_next = base_y + kernel @ y
        dy_next = base_dy + kernel_dx @ y
        diff = float(np.max(np.abs(y_next - y)))
        y, dy = y_next, dy_next
        floor = _PICARD_FLOOR * max(1.0, float(np.max(np.abs(y))))
        if diff <= floor:
            logger.debug("Picard converged after %d sweeps", k + 1)
            break
        if k > _PICARD_BURN_IN and diff > previous:
            raise NonConvergence(f"Picard sweep {k + 1}: difference grew from {previous:.3e} to {diff:.3e}")
        previous = diff
    return Trajectory(xs, y, dy, p, q, lam)
