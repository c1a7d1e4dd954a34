"""Exception hierarchy for slt."""


class SltError(Exception):
    """Base class for every error raised by slt."""
    pass


class ProblemError(SltError):
    """Raised when problem data is invalid."""
    pass


class DomainOrderError(ProblemError):
    """Raised when the points a < c < b are not strictly ordered."""
    pass


class NonpositiveP(ProblemError):
    """Raised when a piecewise value of p is not positive."""
    pass


class SingularTransmission(ProblemError):
    """Raised when Delta12 or Delta34 vanishes."""
    pass


class SignAssumptionError(ProblemError):
    """Raised in strict mode when theta1, theta2, Delta12 or Delta34 is not positive."""
    pass


class ProblemFileError(ProblemError):
    """Raised when a problem file cannot be parsed or fails schema validation."""
    pass


class ConfigError(SltError):
    """Raised for an invalid run configuration."""
    pass


class NumericalError(SltError):
    """Base class for numerical failures."""
    pass


class StepSizeUnderflow(NumericalError):
    """Raised when the integrator step size collapses."""
    pass


class NonFiniteState(NumericalError):
    """Raised when an integrated phase state is not finite."""
    pass


class NonConvergence(NumericalError):
    """Raised when Picard iterates stop contracting."""
    pass


class ConsistencyError(NumericalError):
    """Raised when Delta12*w_minus and Delta34*w_plus disagree."""
    pass


class MaxIterations(NumericalError):
    """Raised when root refinement runs out of iterations."""
    pass


class DegenerateLeading(NumericalError):
    """Raised when an asymptotic leading coefficient vanishes for the problem."""
    pass


class IndexTooSmall(NumericalError):
    """Raised when an asymptotic index gives a non-positive seed."""
    pass


class PieceMismatch(NumericalError):
    """Raised when a point lies outside the piece a solution lives on."""
    pass
