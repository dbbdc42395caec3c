"""Scalar functions behind the probabilistic certificates.

The chance-constrained analysis reduces to the regularized incomplete
beta function: scenario violation levels are its inverse in the sample
count, and spherical-cap geometry turns excluded measure into a certified
ball radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp


@dataclass(frozen=True)
class BetaParams:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ValueError(f"a: must be positive and finite, got {self.a}")
        if not (self.b > 0 and math.isfinite(self.b)):
            raise ValueError(f"b: must be positive and finite, got {self.b}")


def reg_inc_beta(x: float, p: BetaParams) -> float:
    """Regularized incomplete beta function I_x(a, b) on [0, 1]."""
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"x: must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    return float(_sp.betainc(p.a, p.b, x))


def reg_inc_beta_inv(q: float, p: BetaParams) -> float:
    """Unique x in [0, 1] with I_x(a, b) = q, polished to |I_x - q| <= 1e-12."""
    if not (0.0 <= q <= 1.0):
        raise ValueError(f"q: must be in [0, 1], got {q}")
    if q == 0.0:
        return 0.0
    if q == 1.0:
        return 1.0
    x = float(_sp.betaincinv(p.a, p.b, q))
    x = min(max(x, 0.0), 1.0)
    lo, hi = 0.0, 1.0
    ln_b = _sp.betaln(p.a, p.b)
    for _ in range(100):
        f = float(_sp.betainc(p.a, p.b, x)) - q
        if abs(f) <= 1e-13:
            break
        if f > 0:
            hi = x
        else:
            lo = x
        step = None
        if 0.0 < x < 1.0:
            # Newton step with the beta density as derivative
            ln_pdf = (p.a - 1.0) * math.log(x) + (p.b - 1.0) * math.log1p(-x) - ln_b
            if ln_pdf > -700.0:
                step = x - f / math.exp(ln_pdf)
        if step is None or not (lo < step < hi):
            step = 0.5 * (lo + hi)
        x = step
    return x


def violation_level(beta: float, n_samples: int, d: int) -> float:
    """Scenario violation level epsilon(beta, N).

    With N samples and d decision dimensions, constraints built from the
    samples may be violated by at most an epsilon-measure set of unseen
    samples, with confidence 1 - beta.
    """
    if not (0.0 < beta < 1.0):
        raise ValueError(f"beta: must be in (0, 1), got {beta}")
    if d < 1:
        raise ValueError(f"d: must be >= 1, got {d}")
    if n_samples < d:
        raise ValueError(f"insufficient samples: N={n_samples} < d={d}")
    if d == 1:
        # Beta(0, N) degenerates to a point mass at zero
        return 0.0
    return reg_inc_beta_inv(1.0 - beta, BetaParams(d - 1, n_samples))


def inscribed_radius(x: float, dim: int) -> float:
    """Radius of the largest ball certified after removing sphere measure x.

    Removing a spherical-measure-x set from the unit sphere in R^dim
    leaves a set whose symmetrized convex hull still contains the ball of
    this radius.  Returns 0.0 when x >= 1/2: the removed set may then
    cover a halfsphere and nothing is certified (vacuous).
    """
    if dim < 2:
        raise ValueError(f"dim: must be >= 2, got {dim}")
    if x < 0.0:
        raise ValueError(f"x: must be >= 0, got {x}")
    if x >= 0.5:
        return 0.0
    if x == 0.0:
        return 1.0
    t = reg_inc_beta_inv(2.0 * x, BetaParams(0.5 * (dim - 1), 0.5))
    return math.sqrt(1.0 - t)


def measure_inflation(P: np.ndarray) -> float:
    """sqrt(det P / lambda_min(P)^n): spherical-measure growth under P^(1/2)."""
    return _measure_ratio(P, use_min=True)


def measure_retention(P: np.ndarray) -> float:
    """sqrt(det P / lambda_max(P)^n): spherical-measure retention under P^(1/2)."""
    return _measure_ratio(P, use_min=False)


def _measure_ratio(P: np.ndarray, use_min: bool) -> float:
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    w = np.linalg.eigvalsh(0.5 * (P + P.T))
    if w[0] <= 0.0:
        raise ValueError(f"P: must be positive definite, smallest eigenvalue {w[0]}")
    ref = w[0] if use_min else w[-1]
    # det / ref^n as a product of eigenvalue ratios, for scale robustness
    return float(math.sqrt(np.prod(w / ref)))
