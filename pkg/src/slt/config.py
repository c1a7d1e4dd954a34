"""Numerical settings for slt."""

from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Mapping, Optional

from .errors import ConfigError


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances and knobs shared by the solver modules.

    Attributes:
        ivp_tol: Mixed absolute/relative local error tolerance per step
        ivp_method: Name of a scipy embedded Runge-Kutta pair
        max_step: Optional upper bound on the integrator step
        zero_tol: Coefficients with magnitude at or below this count as zero
        consistency_tol: Allowed relative defect between the two Wronskian sides
        refine_xtol: Bracket width target, relative to max(1, |lambda|)
        refine_maxiter: Iteration cap for root refinement
        scan_abs_floor: |w| at or below this is treated as a zero node
        nodes_per_halfperiod: Scan nodes per asymptotic half-period in mu
        window_pad: Seed window half-width, in units of the seed spacing
        lambda_floor: Lower end of the spectrum search; None means -10*max|q|
        picard_iterations: Default iteration count of the Picard oracle
        picard_grid: Default node count of the Picard oracle grid
        workers: Worker threads for independent evaluations
        batch_size: Lambda values integrated together on the scan path
    """

    ivp_tol: float = 1e-10
    ivp_method: str = "DOP853"
    max_step: Optional[float] = None
    zero_tol: float = 0.0
    consistency_tol: float = 1e-6
    refine_xtol: float = 1e-10
    refine_maxiter: int = 200
    scan_abs_floor: float = 1e-300
    nodes_per_halfperiod: int = 8
    window_pad: float = 0.5
    lambda_floor: Optional[float] = None
    picard_iterations: int = 30
    picard_grid: int = 2001
    workers: int = 1
    batch_size: int = 64

    def __post_init__(self):
        if self.ivp_tol <= 0:
            raise ConfigError("ivp_tol must be positive")
        if self.zero_tol < 0:
            raise ConfigError("zero_tol must be non-negative")
        if self.nodes_per_halfperiod < 2:
            raise ConfigError("nodes_per_halfperiod must be at least 2")
        if self.workers < 1 or self.batch_size < 1:
            raise ConfigError("workers and batch_size must be at least 1")

    def with_overrides(self, overrides: Mapping[str, Any]) -> "SolverSettings":
        """Return a copy with some fields replaced.

        String values (as they arrive from the command line) are coerced to
        the type of the field's default.

        Args:
            overrides: Field name to new value

        Returns:
            New SolverSettings

        Raises:
            ConfigError: If a key is unknown or a value cannot be coerced
        """
        known = {f.name: f for f in fields(self)}
        changes: Dict[str, Any] = {}
        for key, value in overrides.items():
            if key not in known:
                raise ConfigError(f"Unknown setting: {key}")
            changes[key] = _coerce(key, value, getattr(self, key))
        return replace(self, **changes)


def _coerce(key: str, value: Any, current: Any) -> Any:
    if not isinstance(value, str):
        return value
    text = value.strip()
    if text.lower() == "none":
        return None
    try:
        if isinstance(current, bool):
            return text.lower() in ("1", "true", "yes", "on")
        if isinstance(current, int):
            return int(text)
        if isinstance(current, float) or current is None:
            return float(text)
    except ValueError as exc:
        raise ConfigError(f"Bad value for {key}: {value!r}") from exc
    return text


DEFAULT_SETTINGS = SolverSettings()
