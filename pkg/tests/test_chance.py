"""Beta-function scalar machinery behind the probabilistic bounds."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from switchcert.chance import (
    BetaParams,
    inscribed_radius,
    measure_inflation,
    measure_retention,
    reg_inc_beta,
    reg_inc_beta_inv,
    violation_level,
)
from conftest import random_pd

PARAM_SUITE = (
    BetaParams(0.5, 0.5),
    BetaParams(1.0, 10.0),
    BetaParams(8.0, 1000.0),
    BetaParams(4.5, 0.5),
)


def test_params_validated():
    with pytest.raises(ValueError, match="a: must be positive"):
        BetaParams(0.0, 1.0)
    with pytest.raises(ValueError, match="b: must be positive"):
        BetaParams(1.0, -2.0)


def test_endpoints_exact():
    p = BetaParams(3.0, 7.0)
    assert reg_inc_beta(0.0, p) == 0.0
    assert reg_inc_beta(1.0, p) == 1.0
    assert reg_inc_beta_inv(0.0, p) == 0.0
    assert reg_inc_beta_inv(1.0, p) == 1.0
    with pytest.raises(ValueError, match="x: must be in"):
        reg_inc_beta(1.5, p)
    with pytest.raises(ValueError, match="q: must be in"):
        reg_inc_beta_inv(-0.1, p)


def test_round_trip_across_suite():
    qs = np.linspace(0.001, 0.999, 25)
    for p in PARAM_SUITE:
        for q in qs:
            x = reg_inc_beta_inv(float(q), p)
            assert abs(reg_inc_beta(x, p) - q) <= 1e-10


def test_symmetry_identity():
    xs = np.linspace(0.01, 0.99, 21)
    for p in PARAM_SUITE:
        swapped = BetaParams(p.b, p.a)
        for x in xs:
            lhs = reg_inc_beta(float(x), p)
            rhs = 1.0 - reg_inc_beta(float(1.0 - x), swapped)
            assert abs(lhs - rhs) <= 1e-10


def test_quantile_against_quadrature_oracle():
    # 0.95 quantile of Beta(8, 1000) by 200-node Gauss-Legendre panels
    # plus bisection, evaluated once and frozen here
    oracle = 0.013016877958773779
    got = reg_inc_beta_inv(0.95, BetaParams(8.0, 1000.0))
    assert abs(got - oracle) <= 1e-12


# ----------------------------------------------------------- violation level


def test_violation_level_closed_form_d2():
    # d = 2 reduces to a Beta(1, N) tail: epsilon = 1 - beta^(1/N)
    for N in (10, 100, 4000):
        got = violation_level(0.05, N, 2)
        assert abs(got - (1.0 - 0.05 ** (1.0 / N))) <= 1e-10


def test_violation_level_edges():
    assert violation_level(0.3, 50, 1) == 0.0
    with pytest.raises(ValueError, match="insufficient samples: N=5 < d=9"):
        violation_level(0.05, 5, 9)
    with pytest.raises(ValueError, match="beta: must be in"):
        violation_level(0.0, 50, 2)
    with pytest.raises(ValueError, match="d: must be >= 1"):
        violation_level(0.05, 50, 0)


def test_violation_level_monotone_in_samples():
    d = 9
    levels = [violation_level(0.05, k * d, d) for k in (1, 2, 10, 100)]
    assert all(a > b for a, b in zip(levels, levels[1:]))


@settings(max_examples=40, deadline=None)
@given(
    beta=st.floats(0.01, 0.3),
    N=st.integers(20, 5000),
    d=st.integers(2, 12),
)
def test_violation_level_bounds(beta, N, d):
    if N < d:
        N = d
    eps = violation_level(beta, N, d)
    assert 0.0 < eps < 1.0
    # smaller beta (higher confidence) needs a larger excluded measure
    assert violation_level(beta * 0.5, N, d) >= eps


# ---------------------------------------------------------- inscribed radius


def test_inscribed_radius_closed_form_dim2():
    for x in np.linspace(0.001, 0.499, 100):
        assert abs(inscribed_radius(float(x), 2) - math.cos(math.pi * x)) <= 1e-8


def test_inscribed_radius_closed_form_dim3():
    for x in np.linspace(0.001, 0.499, 100):
        assert abs(inscribed_radius(float(x), 3) - (1.0 - 2.0 * x)) <= 1e-8


def test_inscribed_radius_edges():
    assert inscribed_radius(0.0, 2) == 1.0
    assert inscribed_radius(0.5, 2) == 0.0
    assert inscribed_radius(0.73, 4) == 0.0
    with pytest.raises(ValueError, match="dim: must be >= 2"):
        inscribed_radius(0.1, 1)
    with pytest.raises(ValueError, match="x: must be >= 0"):
        inscribed_radius(-0.01, 2)


def test_inscribed_radius_monotone():
    vals = [inscribed_radius(x, 5) for x in np.linspace(0.0, 0.49, 30)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


# ------------------------------------------------------------ measure ratios


def test_measure_ratios_known_matrix():
    P = np.diag([4.0, 1.0])
    assert abs(measure_inflation(P) - 2.0) <= 1e-12
    assert abs(measure_retention(P) - 0.5) <= 1e-12
    assert measure_inflation(np.eye(3)) == 1.0
    assert measure_retention(np.eye(3)) == 1.0


def test_measure_ratios_scale_invariant():
    P = np.array([[3.0, 1.0], [1.0, 2.0]])
    assert abs(measure_inflation(7.0 * P) - measure_inflation(P)) <= 1e-10
    assert abs(measure_retention(7.0 * P) - measure_retention(P)) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 5))
def test_measure_ratio_bounds(seed, n):
    P = random_pd(np.random.default_rng(seed), n)
    assert measure_inflation(P) >= 1.0 - 1e-12
    assert measure_retention(P) <= 1.0 + 1e-12


def test_measure_ratio_rejects_indefinite():
    with pytest.raises(ValueError, match="must be positive definite"):
        measure_inflation(np.diag([1.0, -0.5]))
