import math

import numpy as np
import pytest
from scipy.optimize import brentq

from slt.model import delta, validate
from slt.problems import desk_benchmark, dirichlet, paper_example


@pytest.fixture
def jump_problem():
    """Validated built-in example problem (Delta24 = 0)."""
    return validate(paper_example())


@pytest.fixture
def desk():
    """Validated desk benchmark (case iii, Delta24 = 1)."""
    return validate(desk_benchmark())


@pytest.fixture
def classical():
    """Dirichlet problem on [0, pi] with a continuity interface."""
    return validate(dirichlet())


@pytest.fixture
def rng():
    """Deterministic random generator."""
    return np.random.default_rng(20240611)


def _propagate(state, omega, length):
    """Free solution of y'' = -omega^2 y carried over a signed length."""
    y, dy = state
    c, s = math.cos(omega * length), math.sin(omega * length)
    return np.array([y * c + dy * s / omega, -y * omega * s + dy * c])


def trig_char(problem, lam):
    """Closed-form w(lambda) for q = 0 and lambda > 0, without any integrator."""
    dom, coeffs, bc, tm = problem.domain, problem.coeffs, problem.bc, problem.tm
    phi_a = (bc.alpha11 - lam * bc.alpha11p, bc.alpha10 - lam * bc.alpha10p)
    psi_b = (bc.alpha21 + lam * bc.alpha21p, bc.alpha20 + lam * bc.alpha20p)
    phi_minus = _propagate(phi_a, math.sqrt(lam / coeffs.p_minus), dom.c - dom.a)
    beta = np.asarray(tm.beta, dtype=float)
    phi_plus = np.linalg.solve(beta[:, 2:], -beta[:, :2] @ phi_minus)
    psi_plus = _propagate(psi_b, math.sqrt(lam / coeffs.p_plus), dom.c - dom.b)
    return delta(tm, 3, 4) * (phi_plus[0] * psi_plus[1] - phi_plus[1] * psi_plus[0])


def trig_roots(problem, mu_lo, mu_hi, nodes=20001):
    """Roots in mu of the closed-form w on (mu_lo, mu_hi]."""
    mus = np.linspace(mu_lo, mu_hi, nodes)
    values = np.array([trig_char(problem, m * m) for m in mus])
    roots = []
    for i in range(nodes - 1):
        if values[i] * values[i + 1] < 0:
            roots.append(brentq(lambda m: trig_char(problem, m * m), mus[i], mus[i + 1], xtol=1e-14))
    return np.array(roots)


@pytest.fixture
def oracle():
    """Closed-form characteristic function for piecewise-constant, q = 0 problems."""
    return trig_char


@pytest.fixture
def oracle_roots():
    """Roots in mu of the closed-form characteristic function."""
    return trig_roots
