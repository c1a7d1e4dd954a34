"""
slt: Shooting solver for discontinuous Sturm-Liouville problems with
eigenparameter-dependent boundary conditions and transmission conditions.
"""

__version__ = "0.1.0"

from .config import SolverSettings, DEFAULT_SETTINGS
from .errors import SltError, ProblemError, NumericalError, ConfigError
from .model import ProblemSpec, ValidatedProblem, validate, delta, classify
from .charfn import char_eval, char_value
from .eigen import EigenvalueRecord, scan, refine, find_eigenvalues, eigenfunction
from .problems import load_problem, BUILTINS
from .results import ResultTable

__all__ = [
    'SolverSettings',
    'DEFAULT_SETTINGS',
    'SltError',
    'ProblemError',
    'NumericalError',
    'ConfigError',
    'ProblemSpec',
    'ValidatedProblem',
    'validate',
    'delta',
    'classify',
    'char_eval',
    'char_value',
    'EigenvalueRecord',
    'scan',
    'refine',
    'find_eigenvalues',
    'eigenfunction',
    'load_problem',
    'BUILTINS',
    'ResultTable',
]
