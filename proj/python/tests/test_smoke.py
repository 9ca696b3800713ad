import math

import pytest

import confext


def test_normalization():
    assert confext.normalization(2, 0.0) == pytest.approx(1 / math.pi, rel=1e-12)
    assert confext.normalization(3, 0.0) == pytest.approx(1 / (2 * math.pi), rel=1e-12)


def test_sharp_constant_closed_form():
    value, error = confext.sharp_constant(3, 0.0)
    assert value == pytest.approx(confext.sharp_constant_closed_form(3), rel=1e-8)
    assert error < 1e-8


def test_theorem1_callable():
    S, _ = confext.sharp_constant(2, 0.5)
    q = confext.theorem1_quotient(lambda x: 1.0 + 0.4 * x[0] * x[1], 2, 0.5, degree=2)
    assert q.quotient < S
    assert confext.theorem1_quotient(lambda x: 2.0, 2, 0.5, degree=0).quotient == pytest.approx(S, rel=1e-10)


def test_carleman_rejects_non_harmonic():
    with pytest.raises(confext.Inadmissible):
        confext.carleman_quotient(lambda x: x[0] ** 2)
    q = confext.carleman_quotient(lambda x: 0.0)
    assert q.quotient == pytest.approx(1 / (4 * math.pi), rel=1e-12)


def test_domain_errors():
    with pytest.raises(ValueError):
        confext.sharp_constant(3, 1.5)


def test_run_command_deterministic():
    code, first = confext.run("verify-carleman", samples=5)
    _, second = confext.run("verify-carleman", samples=5)
    assert code == 0
    assert first == second
    assert "timing" not in first
    assert first["summary"]["fail"] == 0


def test_run_command_config_error():
    with pytest.raises(confext.ConfigError):
        confext.run("verify-thm1", a=1.5)
