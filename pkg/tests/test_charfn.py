import math
from dataclasses import replace

import numpy as np
import pytest

from slt.charfn import (
    char_at_a,
    char_eval,
    char_grid,
    char_samples,
    char_value,
    char_values,
    wronskian_profile,
)
from slt.config import DEFAULT_SETTINGS
from slt.errors import ConsistencyError
from slt.model import delta


def test_two_sides_agree(desk, rng):
    """Test that Delta12 w- equals Delta34 w+ to relative 1e-8 at 100 random lambda."""
    lams = rng.uniform(-10.0, 400.0, size=100)
    off_zero = 0
    for sample in char_samples(desk, lams):
        assert sample.scaled_defect <= 1e-8
        # the relative defect is only meaningful where w is not lost in cancellation
        if abs(sample.w) >= 1e-2 * sample.scale:
            off_zero += 1
            assert sample.consistency <= 1e-8
    assert off_zero >= 80


def test_char_eval_full_path(desk):
    """Test that dense-output evaluation passes its own consistency check."""
    sample = char_eval(desk, 57.3)
    assert sample.consistency <= 1e-8
    assert sample.w == pytest.approx(delta(desk.tm, 1, 2) * sample.w_minus)
    assert sample.w == pytest.approx(delta(desk.tm, 3, 4) * sample.w_plus, rel=1e-8)
    assert sample.mu == pytest.approx(math.sqrt(57.3))


def test_consistency_error_on_poor_integration(desk):
    """Test that a sloppy integration is caught by the two-sided check."""
    settings = replace(DEFAULT_SETTINGS, ivp_tol=1e-3, consistency_tol=1e-12)
    with pytest.raises(ConsistencyError):
        char_eval(desk, 57.3, settings=settings)


def test_eigenvalue_sample_is_accepted(classical):
    """Test that a sample on an eigenvalue is kept although both sides vanish."""
    sample = char_eval(classical, 4.0)
    assert abs(sample.w) <= 1e-7 * sample.scale
    assert sample.scaled_defect <= 1e-6


def test_negative_lambda_has_no_mu(desk):
    """Test that mu is only defined for lambda >= 0."""
    assert char_eval(desk, -2.0).mu is None


def test_wronskian_profile_constant(desk, rng):
    """Test that W[phi, psi] is constant on each piece."""
    for lam in rng.uniform(-10.0, 400.0, size=5):
        _, w_left, _, w_right, scale = wronskian_profile(desk, lam, points=11)
        assert np.ptp(w_left) <= 1e-8 * scale
        assert np.ptp(w_right) <= 1e-8 * scale


def test_closed_form_oracle(jump_problem, oracle, oracle_roots, rng):
    """Test that the integrated w matches the trigonometric closed form to relative 1e-8."""
    roots = oracle_roots(jump_problem, 0.2, 10.5)
    checked = 0
    while checked < 20:
        lam = rng.uniform(0.1, 100.0)
        # stay clear of the zeros, where a relative comparison is ill-conditioned
        if np.min(np.abs(roots - math.sqrt(lam))) < 0.05:
            continue
        sample = char_eval(jump_problem, lam)
        assert sample.w == pytest.approx(oracle(jump_problem, lam), rel=1e-8)
        checked += 1


def test_fast_path_matches_full(desk, rng):
    """Test that char_values agrees with the two-sided evaluation."""
    lams = rng.uniform(0.5, 300.0, size=8)
    fast = char_values(desk, lams)
    for lam, value in zip(lams, fast):
        sample = char_eval(desk, lam)
        assert value == pytest.approx(sample.w, abs=1e-8 * sample.scale)


def test_char_value_scalar(classical):
    """Test that w vanishes at the classical Dirichlet eigenvalues."""
    away = abs(char_value(classical, 2.5))
    assert abs(char_value(classical, 4.0)) <= 1e-7 * away


def test_char_at_a(desk):
    """Test that the launch-data form at x = a agrees with char_eval."""
    sample = char_eval(desk, 33.0)
    assert char_at_a(desk, 33.0) == pytest.approx(sample.w, abs=1e-8 * sample.scale)


def test_char_grid(classical):
    """Test that the grid helper returns one sample per node."""
    samples = char_grid(classical, [1.5, 2.5, 3.5])
    assert [s.lam for s in samples] == [1.5, 2.5, 3.5]


def test_rk45_pair_agrees(desk):
    """Test that the 4(5) pair reproduces the default integrator's w."""
    settings = replace(DEFAULT_SETTINGS, ivp_method="RK45")
    rk45 = char_eval(desk, 57.3, settings=settings)
    default = char_eval(desk, 57.3)
    assert rk45.consistency <= 1e-6
    assert rk45.w == pytest.approx(default.w, rel=1e-6)
