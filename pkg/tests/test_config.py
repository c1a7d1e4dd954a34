import pytest

from slt.config import DEFAULT_SETTINGS, SolverSettings
from slt.errors import ConfigError


def test_defaults():
    """Test default tolerances."""
    assert DEFAULT_SETTINGS.ivp_tol == 1e-10
    assert DEFAULT_SETTINGS.refine_xtol == 1e-10
    assert DEFAULT_SETTINGS.nodes_per_halfperiod == 8
    assert DEFAULT_SETTINGS.lambda_floor is None


def test_overrides_coerce_strings():
    """Test that command-line strings take the type of the current value."""
    settings = DEFAULT_SETTINGS.with_overrides(
        {"ivp_tol": "1e-12", "workers": "4", "ivp_method": "RK45", "lambda_floor": "-50"})
    assert settings.ivp_tol == 1e-12
    assert settings.workers == 4
    assert settings.ivp_method == "RK45"
    assert settings.lambda_floor == -50.0
    # the original is untouched
    assert DEFAULT_SETTINGS.workers == 1


def test_override_to_none():
    """Test that 'none' clears optional settings."""
    settings = SolverSettings(max_step=0.1).with_overrides({"max_step": "none"})
    assert settings.max_step is None


def test_unknown_override():
    """Test that unknown keys are configuration errors."""
    with pytest.raises(ConfigError):
        DEFAULT_SETTINGS.with_overrides({"no_such_setting": "1"})


def test_bad_values():
    """Test that values that cannot be coerced or are out of range are rejected."""
    with pytest.raises(ConfigError):
        DEFAULT_SETTINGS.with_overrides({"workers": "many"})
    with pytest.raises(ConfigError):
        SolverSettings(ivp_tol=0.0)
    with pytest.raises(ConfigError):
        SolverSettings(nodes_per_halfperiod=1)
