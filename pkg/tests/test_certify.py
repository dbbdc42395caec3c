"""Bound assembly: noise adjustment, geometric terms, vacuity behavior."""

import math

import numpy as np
import pytest

from switchcert.certify import (
    BoundReport,
    continuous_bound,
    hybrid_bound,
    noise_adjusted_rate,
)
from switchcert.chance import (
    inscribed_radius,
    measure_inflation,
    measure_retention,
    violation_level,
)
from switchcert.sampling import SamplingConfig, sample_continuous, sample_hybrid
from switchcert.solver import solve_continuous, solve_hybrid
from switchcert.systems import build_lift


@pytest.fixture(scope="module")
def hybrid_report(ncs_hybrid_200):
    samples, sol = ncs_hybrid_200
    return samples, sol, hybrid_bound(sol, samples, beta=0.05)


def test_noise_adjusted_rate_formula(ncs_hybrid_200):
    _, sol = ncs_hybrid_200
    for (s, t) in ((0, 1), (2, 0), (1, 1)):
        w_s = np.linalg.eigvalsh(sol.P_star[s])
        w_t = np.linalg.eigvalsh(sol.P_star[t])
        expect = sol.lambda_star + math.sqrt(w_t[-1] / w_s[0]) * 0.2
        assert noise_adjusted_rate(sol, s, t, 0.2, 1) == pytest.approx(expect, rel=1e-10)
    assert noise_adjusted_rate(sol, 0, 1, 0.0, 1) == pytest.approx(sol.lambda_star)


def test_report_arithmetic_recomputes(hybrid_report):
    samples, sol, rep = hybrid_report
    n = samples.dimension
    d = samples.node_count * n * (n + 1) // 2
    assert rep.epsilon == pytest.approx(violation_level(0.05, samples.size, d), abs=1e-12)
    eps_count = rep.epsilon * samples.lifted_edge_count
    assert rep.mode == "hybrid" and rep.l == 1 and rep.N == samples.size
    for term in rep.per_edge:
        lam_bar = noise_adjusted_rate(sol, term.source, term.target, samples.W, samples.l)
        assert term.lambda_bar == pytest.approx(lam_bar, rel=1e-12)
        assert term.inflation == pytest.approx(
            measure_inflation(sol.P_star[term.source]), rel=1e-10
        )
        assert term.primary_arg == pytest.approx(0.5 * eps_count * term.inflation, rel=1e-12)
        assert term.primary_radius == pytest.approx(
            inscribed_radius(term.primary_arg, n), rel=1e-10
        )
        if term.primary_radius > 0:
            assert term.primary_bound == pytest.approx(
                (term.lambda_bar / term.primary_radius) ** (1.0 / samples.l), rel=1e-12
            )
        ret = measure_retention(sol.P_star[term.source])
        assert term.retention == pytest.approx(ret, rel=1e-10)
        assert term.alternative_arg == pytest.approx(
            0.5 * (1.0 - (1.0 - eps_count) * ret), rel=1e-10
        )
    assert rep.rho_primary == max(t.primary_bound for t in rep.per_edge)
    assert rep.rho_alternative == max(t.alternative_bound for t in rep.per_edge)
    assert rep.rho_final == min(rep.rho_primary, rep.rho_alternative)
    assert rep.vacuous == math.isinf(rep.rho_final)
    assert rep.certifies_stability == (rep.rho_final < 1.0)


def test_observed_pairs_sorted_and_complete(hybrid_report):
    samples, _, rep = hybrid_report
    pairs = [(t.source, t.target) for t in rep.per_edge]
    assert pairs == sorted(pairs)
    assert set(pairs) == {(int(s), int(t)) for s, t in zip(samples.sources, samples.targets)}


def test_bound_dominates_sampled_rate(hybrid_report):
    # the extension to all of state space can only lose ground
    samples, sol, rep = hybrid_report
    if not rep.vacuous:
        assert rep.rho_final >= sol.lambda_star - 1e-12
        for term in rep.per_edge:
            assert rep.rho_final >= min(term.primary_bound, term.alternative_bound) - 1e-12


def test_vacuous_at_tiny_n_clears_with_more_data(ncs):
    small = sample_hybrid(ncs, SamplingConfig(l=1, N=30, W=0.0, seed=51))
    rep_small = hybrid_bound(solve_hybrid(small), small, beta=0.05)
    assert rep_small.vacuous and math.isinf(rep_small.rho_final)
    assert not rep_small.certifies_stability
    big = sample_hybrid(ncs, SamplingConfig(l=1, N=4000, W=0.0, seed=51))
    rep_big = hybrid_bound(solve_hybrid(big), big, beta=0.05)
    assert not rep_big.vacuous
    assert rep_big.rho_final < 1.0


def test_continuous_report(ncs):
    s = sample_continuous(ncs, SamplingConfig(l=1, N=2000, W=0.0, seed=52))
    sol = solve_continuous(s)
    rep = continuous_bound(sol, s, beta=0.05)
    assert rep.mode == "continuous"
    assert len(rep.per_edge) == 1
    assert rep.per_edge[0].source == 0 and rep.per_edge[0].target == 0
    n = s.dimension
    assert rep.epsilon == pytest.approx(
        violation_level(0.05, s.size, n * (n + 1) // 2), abs=1e-12
    )
    # one shared shape cannot beat the per-node certificate's rate
    assert rep.rho_final >= sol.lambda_star - 1e-12
    lift = build_lift(ncs, 1)
    assert s.word_count == len(lift.words)


def test_report_is_frozen(hybrid_report):
    _, _, rep = hybrid_report
    assert isinstance(rep, BoundReport)
    with pytest.raises(AttributeError):
        rep.rho_final = 0.0
