"""Probabilistic upper bounds on the constrained joint spectral radius.

A scenario solution certifies contraction on the sampled directions only.
The chance-constrained argument extends it to all of state space: with
confidence 1 - beta the sampled shapes contract every direction outside
an epsilon-measure set, and spherical-cap geometry converts that excluded
measure into an inflation factor on the certified rate.  Two variants of
the geometric step are computed; the reported bound is their minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chance import (
    inscribed_radius,
    measure_inflation,
    measure_retention,
    violation_level,
)
from .sampling import ContinuousSamples, HybridSamples
from .solver import ScenarioSolution
from .symmat import eig_bounds


@dataclass(frozen=True)
class EdgeBound:
    """Bound ingredients for one observed (source, target) node pair."""

    source: int
    target: int
    lambda_bar: float
    inflation: float
    primary_arg: float
    primary_radius: float
    primary_bound: float
    retention: float
    alternative_arg: float
    alternative_radius: float
    alternative_bound: float


@dataclass(frozen=True)
class BoundReport:
    mode: str
    l: int
    N: int
    beta: float
    epsilon: float
    per_edge: tuple[EdgeBound, ...]
    rho_primary: float
    rho_alternative: float
    rho_final: float
    vacuous: bool
    certifies_stability: bool


def noise_adjusted_rate(
    solution: ScenarioSolution, source: int, target: int, W: float, l: int
) -> float:
    """Observed l-step rate inflated by the worst-case noise contribution.

    lambda_star^l + sqrt(lambda_max(P_target) / lambda_min(P_source)) * W.
    """
    lo_s, _ = eig_bounds(solution.P_star[source])
    _, hi_t = eig_bounds(solution.P_star[target])
    return solution.lambda_star**l + math.sqrt(hi_t / lo_s) * W


def _pair_bound(
    solution: ScenarioSolution,
    source: int,
    target: int,
    eps_count: float,
    W: float,
    l: int,
    n: int,
) -> EdgeBound:
    lam_bar = noise_adjusted_rate(solution, source, target, W, l)
    P_s = solution.P_star[source]
    kappa = measure_inflation(P_s)
    arg_p = 0.5 * eps_count * kappa
    rad_p = inscribed_radius(arg_p, n)
    bound_p = (lam_bar / rad_p) ** (1.0 / l) if rad_p > 0.0 else math.inf
    retention = measure_retention(P_s)
    if eps_count < 1.0:
        arg_a = 0.5 * (1.0 - (1.0 - eps_count) * retention)
        rad_a = inscribed_radius(arg_a, n)
    else:
        arg_a, rad_a = 0.5, 0.0
    bound_a = (lam_bar / rad_a) ** (1.0 / l) if rad_a > 0.0 else math.inf
    return EdgeBound(
        source, target, lam_bar, kappa, arg_p, rad_p, bound_p,
        retention, arg_a, rad_a, bound_a,
    )


def _assemble(mode, l, N, beta, eps, terms) -> BoundReport:
    rho_primary = max(t.primary_bound for t in terms)
    rho_alternative = max(t.alternative_bound for t in terms)
    rho_final = min(rho_primary, rho_alternative)
    vacuous = math.isinf(rho_final)
    return BoundReport(
        mode, l, N, beta, eps, tuple(terms),
        rho_primary, rho_alternative, rho_final, vacuous,
        certifies_stability=rho_final < 1.0,
    )


def hybrid_bound(
    solution: ScenarioSolution, samples: HybridSamples, beta: float
) -> BoundReport:
    """Upper bound from hybrid observations.

    The decision dimension counts every node shape; the excluded measure
    is spread over the lifted edge set, and the worst case over observed
    (source, target) pairs is taken.
    """
    n = samples.dimension
    d = samples.node_count * n * (n + 1) // 2
    eps = violation_level(beta, samples.size, d)
    eps_count = eps * samples.lifted_edge_count
    pairs = sorted({(int(s), int(t)) for s, t in zip(samples.sources, samples.targets)})
    terms = [
        _pair_bound(solution, s, t, eps_count, samples.W, samples.l, n) for s, t in pairs
    ]
    return _assemble("hybrid", samples.l, samples.size, beta, eps, terms)


def continuous_bound(
    solution: ScenarioSolution, samples: ContinuousSamples, beta: float
) -> BoundReport:
    """Upper bound from continuous observations.

    A single shape, decision dimension n(n+1)/2, excluded measure spread
    over the length-l language.
    """
    n = samples.dimension
    d = n * (n + 1) // 2
    eps = violation_level(beta, samples.size, d)
    eps_count = eps * samples.word_count
    terms = [_pair_bound(solution, 0, 0, eps_count, samples.W, samples.l, n)]
    return _assemble("continuous", samples.l, samples.size, beta, eps, terms)
