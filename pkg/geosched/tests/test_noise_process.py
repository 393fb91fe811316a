import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats

from geosched.errors import DomainError, GeoSchedError, ProcessError
from geosched.noise_process import (
    F_inverse, ProcessKind, alpha_dot, make_process, time_at_alpha)

LINEAR = make_process('linear-alpha')
CONST1 = make_process('constant-beta', [1.0])
CONST2 = make_process('constant-beta', [2.0])
TABLE = make_process('tabulated-beta', [0.0, 1.0, 0.5, 3.0, 1.0, 1.0])


def test_linear_alpha():
    assert LINEAR.alpha(0.25) == 0.75
    assert LINEAR.alpha_1 == 0.0
    assert LINEAR.F_1 == math.inf
    assert LINEAR.F(0.5) == pytest.approx(math.log(2))
    assert LINEAR.kind is ProcessKind.LINEAR_ALPHA


def test_constant_beta():
    assert CONST1.alpha(1.0) == pytest.approx(math.exp(-1), abs=1e-15)
    assert CONST2.F(0.5) == 1.0
    assert CONST1.alpha_1 == pytest.approx(0.367879, abs=1e-6)


def test_tabulated_beta_integrates_each_piece():
    assert TABLE.F(0.5) == pytest.approx(1.0, abs=1e-15)
    assert TABLE.F_1 == pytest.approx(2.0, abs=1e-15)
    assert TABLE.beta(0.25) == pytest.approx(2.0)
    # F is quadratic on a linear piece
    assert TABLE.F(0.25) == pytest.approx(0.25 + 0.5 * 4.0 * 0.25 ** 2)


def test_flat_table_matches_constant_beta():
    flat = make_process('tabulated-beta', [0.0, 1.0, 1.0, 1.0])
    t = np.linspace(0, 1, 11)
    np.testing.assert_allclose(flat.alpha(t), CONST1.alpha(t), rtol=1e-15)


@pytest.mark.parametrize("kind, params", [
    ('constant-beta', [0.0]),
    ('constant-beta', [-1.0]),
    ('constant-beta', [math.inf]),
    ('constant-beta', []),
    ('linear-alpha', [1.0]),
    ('tabulated-beta', [0.0, 1.0]),
    ('tabulated-beta', [0.0, 1.0, 1.0]),
    ('tabulated-beta', [0.0, 1.0, 0.5, 1.0]),
    ('tabulated-beta', [0.0, 1.0, 1.0, 0.0]),
    ('tabulated-beta', [0.0, 1.0, 0.5, 1.0, 0.5, 1.0, 1.0, 1.0]),
    ('cosine', []),
])
def test_make_process_rejects(kind, params):
    with pytest.raises(ProcessError):
        make_process(kind, params)


def test_describe_round_trips_through_make_process():
    for process in (LINEAR, CONST2, TABLE):
        doc = process.describe()
        assert make_process(doc['kind'], doc['params']) == process


@pytest.mark.parametrize("process, y, expected", [
    (LINEAR, 0.0, 0.0),
    (LINEAR, math.log(2), 0.5),
    (CONST2, 1.0, 0.5),
    (LINEAR, math.inf, 1.0),
    (CONST1, 1.0, 1.0),
])
def test_F_inverse_values(process, y, expected):
    assert F_inverse(process, y) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("process, y", [
    (LINEAR, -1e-3), (CONST1, 1.5), (TABLE, 2.5), (CONST1, math.nan)])
def test_F_inverse_domain(process, y):
    with pytest.raises(DomainError):
        F_inverse(process, y)
    with pytest.raises(GeoSchedError):
        F_inverse(process, y)


@given(floats(min_value=0.0, max_value=0.999))
def test_F_inverse_inverts_F(t):
    for process in (LINEAR, CONST2, TABLE):
        assert F_inverse(process, float(process.F(t))) == \
            pytest.approx(t, abs=1e-9)


@pytest.mark.parametrize("process, t, expected", [
    (LINEAR, 0.3, -1.0),
    (LINEAR, 1.0, -1.0),
    (CONST1, 0.0, -1.0),
    (CONST2, 0.5, -2 * math.exp(-1)),
])
def test_alpha_dot(process, t, expected):
    assert alpha_dot(process, t) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("process", [LINEAR, CONST1, CONST2, TABLE])
def test_survival_is_exp_of_minus_F(process):
    t = np.append(np.random.default_rng(7).uniform(0.0, 1.0, 1000),
                  [0.0, 0.5, 1.0])
    np.testing.assert_allclose(np.exp(-process.F(t)), process.alpha(t),
                               rtol=0, atol=1e-12)


@pytest.mark.parametrize("process", [LINEAR, CONST1, CONST2, TABLE])
def test_alpha_dot_matches_finite_difference(process):
    # beta of TABLE has a corner at 0.5
    h = 1e-7
    t = np.linspace(0.01, 0.99, 981)
    fd = (process.alpha(t + h) - process.alpha(t - h)) / (2 * h)
    np.testing.assert_allclose(process.alpha_dot(t), fd, rtol=1e-6)
    for s in (0.01, 0.5, 0.99):
        assert alpha_dot(process, s) == pytest.approx(
            float(process.alpha_dot(s)), rel=1e-15)


def test_alpha_dot_domain():
    with pytest.raises(DomainError):
        alpha_dot(CONST1, 1.5)


def test_time_at_alpha():
    assert time_at_alpha(LINEAR, 0.5) == 0.5
    assert time_at_alpha(CONST1, math.exp(-0.5)) == pytest.approx(0.5)
    assert time_at_alpha(LINEAR, 0.0) == 1.0
    with pytest.raises(DomainError):
        time_at_alpha(CONST1, 1.5)
    with pytest.raises(DomainError):
        time_at_alpha(CONST1, 0.0)


def test_time_at_alpha_underflowed_terminal_value():
    process = make_process('constant-beta', [800.0])
    assert process.alpha_1 == 0.0
    assert time_at_alpha(process, 0.0) == 1.0
    assert time_at_alpha(process, 1e-300) == pytest.approx(
        -math.log(1e-300) / 800.0)
