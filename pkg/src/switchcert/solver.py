"""Sampled ellipsoidal-norm contraction program.

Given observed l-step transitions ((x, u), (y, v)) of a switching system,
find node-wise quadratic shapes P_u and the smallest rate lambda with

    y' P_v y  <=  lambda^(2l) x' P_u x        for every observation,
    P_u >= I,   ||P_u||_F <= C,

minimizing (lambda, max_u ||P_u||_F) lexicographically.  Both stages are
bisections; each feasibility query runs Dykstra's alternating projections
between two exactly projected blocks: the product of per-node spectral
sets (an eigenvalue floor intersected with a Frobenius ball) and the cone
cut out by the observation halfspaces, whose projection is recovered from
a dual nonnegative least squares via the Moreau decomposition.  Only an
actively grown subset of halfspaces enters the cone; candidate points are
always re-checked against every row before being accepted.
"""

from __future__ import annotations

import io
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from .symmat import eig_bounds, project_eig_floor, sym_eig

DEFAULT_NORM_CAP = 1e6


class UnboundedGrowthError(RuntimeError):
    """Raised when no finite rate below the bisection cap is feasible."""


@dataclass(frozen=True)
class SolverTolerances:
    lam_tol: float = 1e-3
    c_tol_scale: float = 1e-2          # c tolerance is c_tol_scale * sqrt(n)
    feas_tol: float = 1e-6
    slack: float = 10.0                # accepted certificates may violate by slack*feas_tol
    max_sweeps: int = 2000             # Dykstra cap, in full two-block cycles
    stagnation_window: int = 200
    lam_cap: float = 1e6
    max_outer_rounds: int = 64
    add_per_round: int = 8


@dataclass(frozen=True)
class ConstraintRows:
    """Observation halfspaces with cached outer-product geometry."""

    sources: np.ndarray
    targets: np.ndarray
    xs: np.ndarray
    ys: np.ndarray
    xx: np.ndarray = field(repr=False)   # (N, n, n) outer products
    yy: np.ndarray = field(repr=False)
    nx2: np.ndarray = field(repr=False)  # |x|^2 per row
    ny2: np.ndarray = field(repr=False)
    xy2: np.ndarray = field(repr=False)  # (x . y)^2 per row

    @property
    def size(self) -> int:
        return len(self.sources)

    @property
    def dimension(self) -> int:
        return self.xs.shape[1]


def constraint_rows(sources, targets, xs, ys) -> ConstraintRows:
    sources = np.asarray(sources, dtype=int)
    targets = np.asarray(targets, dtype=int)
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 2 or ys.shape != xs.shape:
        raise ValueError(f"rows: xs shape {xs.shape} and ys shape {ys.shape} must match (N, n)")
    if len(sources) != len(xs) or len(targets) != len(xs):
        raise ValueError("rows: sources/targets length must match sample count")
    nx2 = np.einsum("ij,ij->i", xs, xs)
    ny2 = np.einsum("ij,ij->i", ys, ys)
    bad = np.nonzero(nx2 <= 0.0)[0]
    if bad.size:
        raise ValueError(f"rows: sample {bad[0]} has zero x")
    xy = np.einsum("ij,ij->i", xs, ys)
    xx = xs[:, :, None] * xs[:, None, :]
    yy = ys[:, :, None] * ys[:, None, :]
    return ConstraintRows(sources, targets, xs, ys, xx, yy, nx2, ny2, xy * xy)


def rows_from_hybrid(samples) -> ConstraintRows:
    """Rows from hybrid observations; only (x, u) and (y, v) are read."""
    return constraint_rows(samples.sources, samples.targets, samples.xs, samples.ys)


def rows_from_continuous(samples) -> ConstraintRows:
    """Rows from continuous observations: a single shared graph node."""
    zeros = np.zeros(samples.size, dtype=int)
    return constraint_rows(zeros, zeros, samples.xs, samples.ys)


@dataclass(frozen=True)
class TraceEntry:
    phase: str
    value: float
    feasible: bool
    sweeps: int
    rounds: int


@dataclass(frozen=True)
class SolveDiagnostics:
    trace: tuple[TraceEntry, ...]
    feasibility_calls: int
    total_sweeps: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("phase,value,feasible,sweeps,rounds\n")
        for t in self.trace:
            buf.write(
                f"{t.phase},{format(t.value, '.15g')},{str(t.feasible).lower()},{t.sweeps},{t.rounds}\n"
            )
        return buf.getvalue()


@dataclass(frozen=True)
class ScenarioSolution:
    lambda_star: float
    P_star: tuple[np.ndarray, ...]
    c_star: float
    l: int
    node_count: int
    norm_cap: float
    diagnostics: SolveDiagnostics


def _row_values(rows: ConstraintRows, z: np.ndarray, factor: float):
    """(lhs, rhs) = (y' P_v y, factor * x' P_u x) for every row."""
    flat = z.reshape(z.shape[0], -1)
    lhs = np.einsum("ij,ij->i", rows.yy.reshape(rows.size, -1), flat[rows.targets])
    rhs = factor * np.einsum("ij,ij->i", rows.xx.reshape(rows.size, -1), flat[rows.sources])
    return lhs, rhs


def _row_violations(rows: ConstraintRows, z: np.ndarray, factor: float) -> np.ndarray:
    lhs, rhs = _row_values(rows, z, factor)
    return (lhs - rhs) / (1.0 + np.abs(rhs))


def _set_violation(z: np.ndarray, rows, active, factor, ball_radius) -> float:
    """Worst normalized violation of the point z over all constraint sets."""
    worst = 0.0
    for u in range(z.shape[0]):
        lo, _ = eig_bounds(z[u])
        worst = max(worst, 1.0 - lo)
        nrm = math.sqrt(float(np.sum(z[u] * z[u])))
        worst = max(worst, (nrm - ball_radius) / (1.0 + ball_radius))
    if rows.size and len(active):
        sub = _subset(rows, active)
        worst = max(worst, float(np.max(_row_violations(sub, z, factor), initial=0.0)))
    return worst


def _subset(rows: ConstraintRows, idx) -> ConstraintRows:
    idx = np.asarray(idx, dtype=int)
    return ConstraintRows(
        rows.sources[idx], rows.targets[idx], rows.xs[idx], rows.ys[idx],
        rows.xx[idx], rows.yy[idx], rows.nx2[idx], rows.ny2[idx], rows.xy2[idx],
    )


def _project_floor_ball(M: np.ndarray, radius: float) -> np.ndarray:
    """Exact projection onto {P = P': P >= I, ||P||_F <= radius}.

    Projecting the eigenvalues onto {v >= 1, |v| <= radius} in the
    eigenbasis of the symmetric part gives the matrix projection; the
    scalar multiplier mu solves |max(1, v/(1+mu))| = radius.
    """
    n = M.shape[0]
    if radius < math.sqrt(n):
        raise ValueError(f"radius: ball {radius} cannot hold eigenvalue floor in dimension {n}")
    w, V = sym_eig(M)
    clamped = np.maximum(w, 1.0)
    if math.sqrt(float(clamped @ clamped)) <= radius:
        out = (V * clamped) @ V.T
        return 0.5 * (out + out.T)

    def norm_at(mu: float) -> float:
        v = np.maximum(w / (1.0 + mu), 1.0)
        return math.sqrt(float(v @ v))

    lo, hi = 0.0, 1.0
    while norm_at(hi) > radius:
        lo, hi = hi, 2.0 * hi
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if norm_at(mid) > radius:
            lo = mid
        else:
            hi = mid
    v = np.maximum(w / (1.0 + hi), 1.0)
    out = (V * v) @ V.T
    return 0.5 * (out + out.T)


def _halfspace_matrix(rows: ConstraintRows, active: list[int], factor: float,
                      node_count: int, dim: int) -> np.ndarray:
    """Stacked normals of the active rows over the flattened shapes."""
    block = dim * dim
    C = np.zeros((len(active), node_count * block))
    for k, i in enumerate(active):
        s, t = int(rows.sources[i]), int(rows.targets[i])
        C[k, t * block : (t + 1) * block] += rows.yy[i].reshape(-1)
        C[k, s * block : (s + 1) * block] -= factor * rows.xx[i].reshape(-1)
    return C


class _ConeProjector:
    """Exact projection onto {z: Cz <= 0}.

    The polar cone is generated by the rows of C, so by the Moreau
    decomposition the projection is the residual of the nonnegative
    least squares min_{theta >= 0} |C' theta - y|.  The dual support
    barely changes between consecutive Dykstra sweeps, so the previous
    support is retried through a plain least squares first and kept
    whenever the full KKT conditions hold; otherwise the exact NNLS
    runs and refreshes the support.
    """

    def __init__(self, C: np.ndarray):
        self.C = C
        self.CT = np.ascontiguousarray(C.T)
        self.row_norms = np.sqrt(np.einsum("ij,ij->i", C, C)) + 1e-300
        self.support: np.ndarray | None = None

    def __call__(self, y: np.ndarray) -> np.ndarray:
        scale = math.sqrt(float(y @ y)) + 1e-300
        vals = self.C @ y
        if float(np.max(vals, initial=0.0)) <= 0.0:
            return y
        if self.support is not None and self.support.size:
            M = self.CT[:, self.support]
            theta_s, *_ = np.linalg.lstsq(M, y, rcond=None)
            if float(np.min(theta_s)) >= 0.0:
                proj = y - M @ theta_s
                kkt = self.C @ proj / (self.row_norms * scale)
                if float(np.max(kkt, initial=0.0)) <= 1e-13:
                    return proj
        theta, _ = nnls(self.CT, y)
        self.support = np.nonzero(theta > 0.0)[0]
        return y - self.CT @ theta


def _dykstra(
    z: np.ndarray,
    rows: ConstraintRows,
    active: list[int],
    factor: float,
    ball_radius: float,
    tol: SolverTolerances,
) -> tuple[np.ndarray | None, int]:
    """Two-block Dykstra between the spectral sets and the halfspace cone.

    Candidates are taken after the spectral projection, so they satisfy
    the floor and ball exactly and only the active rows carry residual.
    Returns (point, sweeps) on success and (None, sweeps) on an
    infeasibility verdict: the residual stayed above feas_tol for the
    whole budget while the window-averaged iterate still violates some
    set by more than slack * feas_tol.
    """
    U, n = z.shape[0], z.shape[1]
    if not len(active):
        out = np.array([_project_floor_ball(z[u], ball_radius) for u in range(U)])
        return out, 1
    cone = _ConeProjector(_halfspace_matrix(rows, active, factor, U, n))
    sub = _subset(rows, np.asarray(active, dtype=int))
    p = np.zeros_like(z)
    q = np.zeros(U * n * n)
    window = tol.stagnation_window
    history: deque[np.ndarray] = deque(maxlen=window)
    res_hist: list[float] = []
    slack = tol.slack * tol.feas_tol

    def average_infeasible() -> bool:
        zbar = np.mean(np.stack(tuple(history)), axis=0)
        return _set_violation(zbar, rows, active, factor, ball_radius) > slack

    for sweep in range(1, tol.max_sweeps + 1):
        y1 = z + p
        cand = np.array([_project_floor_ball(y1[u], ball_radius) for u in range(U)])
        p = y1 - cand
        y2 = cand.reshape(-1) + q
        z2 = cone(y2)
        q = y2 - z2
        z = z2.reshape(U, n, n)
        res = float(np.max(_row_violations(sub, cand, factor), initial=0.0))
        history.append(cand)
        res_hist.append(res)
        if res <= tol.feas_tol:
            return cand, sweep
        # stagnation probe: no meaningful progress over a full window and
        # the averaged iterate still violates
        if sweep >= 2 * window and sweep % window == 0:
            recent = min(res_hist[-window:])
            previous = min(res_hist[-2 * window : -window])
            if previous - recent < 0.005 * previous and average_infeasible():
                return None, sweep
    # budget exhausted: try the averaged iterate before giving up
    zbar = np.mean(np.stack(tuple(history)), axis=0)
    for u in range(U):
        zbar[u] = project_eig_floor(zbar[u])
    if _set_violation(zbar, rows, active, factor, ball_radius) <= slack:
        return zbar, tol.max_sweeps
    return None, tol.max_sweeps


def _seed_active(rows: ConstraintRows, per_pair: int = 4) -> list[int]:
    """Initial working set: the largest growth ratios within each node pair."""
    groups: dict[tuple[int, int], list[int]] = {}
    ratio = rows.ny2 / rows.nx2
    for i in range(rows.size):
        groups.setdefault((int(rows.sources[i]), int(rows.targets[i])), []).append(i)
    seed: list[int] = []
    for key in sorted(groups):
        members = groups[key]
        members.sort(key=lambda i: (-ratio[i], i))
        seed.extend(members[:per_pair])
    return sorted(seed)


def feasibility(
    rows: ConstraintRows,
    lam: float,
    node_count: int,
    dim: int,
    l: int,
    ball_radius: float = DEFAULT_NORM_CAP,
    tol: SolverTolerances | None = None,
    start: np.ndarray | None = None,
    seed_active: list[int] | None = None,
) -> np.ndarray | None:
    """Feasible shapes (node_count, n, n) at rate lam, or None if infeasible."""
    point, _ = _feasibility_stats(
        rows, lam, node_count, dim, l, ball_radius, tol or SolverTolerances(), start, seed_active
    )
    return point


def _feasibility_stats(
    rows: ConstraintRows,
    lam: float,
    node_count: int,
    dim: int,
    l: int,
    ball_radius: float,
    tol: SolverTolerances,
    start: np.ndarray | None = None,
    seed_active: list[int] | None = None,
) -> tuple[np.ndarray | None, dict]:
    if lam < 0.0:
        raise ValueError(f"lam: must be >= 0, got {lam}")
    factor = lam ** (2 * l)
    stats = {"sweeps": 0, "rounds": 0}
    z = (
        np.tile(np.eye(dim), (node_count, 1, 1))
        if start is None
        else np.array(start, dtype=float)
    )
    if rows.size == 0:
        return z, stats
    # rates at or below which some nonzero y makes the system empty
    if factor <= 0.0 and float(np.max(rows.ny2)) > 0.0:
        return None, stats
    active = list(seed_active) if seed_active is not None else _seed_active(rows)
    active = [i for i in active if rows.ny2[i] > 0.0]
    known = set(active)
    for _ in range(tol.max_outer_rounds):
        stats["rounds"] += 1
        point, sweeps = _dykstra(z, rows, active, factor, ball_radius, tol)
        stats["sweeps"] += sweeps
        if point is None:
            return None, stats
        z = point
        viol = _row_violations(rows, z, factor)
        worst = float(np.max(viol))
        if worst <= tol.feas_tol:
            return z, stats
        order = np.argsort(-viol)
        added = 0
        for i in order:
            i = int(i)
            if viol[i] <= tol.feas_tol:
                break
            if i not in known:
                known.add(i)
                active.append(i)
                added += 1
                if added >= tol.add_per_round:
                    break
        if added == 0:
            # every violated row is already active yet Dykstra accepted:
            # tolerate certificate slack, otherwise report infeasible
            if worst <= tol.slack * tol.feas_tol:
                return z, stats
            return None, stats
    return None, stats


def _verify(rows, z, lam, l, tol) -> float:
    if rows.size == 0:
        return 0.0
    return float(np.max(_row_violations(rows, z, lam ** (2 * l))))


def solve_rows(
    rows: ConstraintRows,
    node_count: int,
    dim: int,
    l: int,
    norm_cap: float = DEFAULT_NORM_CAP,
    tol: SolverTolerances | None = None,
) -> ScenarioSolution:
    """Lexicographic (lambda, max Frobenius norm) minimization over the rows."""
    tol = tol or SolverTolerances()
    trace: list[TraceEntry] = []
    calls = [0]
    sweeps_total = [0]

    def probe(lam, ball, start, phase, seed=None):
        calls[0] += 1
        point, stats = _feasibility_stats(
            rows, lam, node_count, dim, l, ball, tol, start, seed
        )
        sweeps_total[0] += stats["sweeps"]
        trace.append(TraceEntry(phase, lam if phase == "rate" else ball,
                                point is not None, stats["sweeps"], stats["rounds"]))
        return point

    eye = np.tile(np.eye(dim), (node_count, 1, 1))
    zero_rows = rows.size == 0 or float(np.max(rows.ny2)) == 0.0

    if zero_rows:
        lam_star, p_star = 0.0, eye.copy()
    else:
        ratio = float(np.max(np.sqrt(rows.ny2 / rows.nx2))) ** (1.0 / l)
        hi = 2.0 * ratio
        p_hi = probe(hi, norm_cap, eye.copy(), "rate")
        while p_hi is None:
            hi *= 2.0
            if hi > tol.lam_cap:
                raise UnboundedGrowthError(
                    f"unbounded growth: no feasible rate found below cap {tol.lam_cap}"
                )
            p_hi = probe(hi, norm_cap, eye.copy(), "rate")
        lo = 0.0
        while True:
            while hi - lo > tol.lam_tol:
                mid = 0.5 * (lo + hi)
                point = probe(mid, norm_cap, p_hi.copy(), "rate")
                if point is None:
                    lo = mid
                else:
                    hi, p_hi = mid, point
            if lo == 0.0:
                break
            # warm starts can stall in a corner of the feasible set; the
            # bracket floor must survive a probe from the neutral start,
            # else the bisection resumes below the point it just found
            point = probe(lo, norm_cap, eye.copy(), "rate")
            if point is None:
                break
            hi, p_hi = lo, point
            lo = 0.0
        lam_star, p_star = hi, p_hi

    # second stage: shrink the worst Frobenius norm at the fixed rate.
    # The rate-phase certificate is usually near norm-minimal already, so
    # the bracket is walked down from its norm with doubling steps
    # (feasible probes are cheap, infeasible ones are not) and only the
    # final doubled step is bisected.
    c_tol = tol.c_tol_scale * math.sqrt(dim)
    c_lo = math.sqrt(dim)
    c_hi = max(float(np.sqrt(np.max(np.sum(p_star * p_star, axis=(1, 2))))), c_lo)
    p_c = p_star
    step = c_tol
    while c_hi - c_lo > c_tol:
        cand = max(c_hi - step, c_lo)
        point = probe(lam_star, min(cand, norm_cap), p_c.copy(), "norm")
        if point is None:
            c_lo = cand
            break
        c_hi, p_c = cand, point
        step *= 2.0
    while c_hi - c_lo > c_tol:
        mid = 0.5 * (c_lo + c_hi)
        point = probe(lam_star, min(mid, norm_cap), p_c.copy(), "norm")
        if point is None:
            c_lo = mid
        else:
            c_hi, p_c = mid, point

    final = np.array([project_eig_floor(p_c[u]) for u in range(node_count)])
    residual = _verify(rows, final, lam_star, l, tol)
    if residual > tol.slack * tol.feas_tol:
        raise RuntimeError(
            f"certificate verification failed: residual {residual} exceeds "
            f"{tol.slack * tol.feas_tol}"
        )
    c_star = float(np.sqrt(np.max(np.sum(final * final, axis=(1, 2)))))
    mats = []
    for u in range(node_count):
        M = final[u]
        M.setflags(write=False)
        mats.append(M)
    diag = SolveDiagnostics(tuple(trace), calls[0], sweeps_total[0])
    return ScenarioSolution(lam_star, tuple(mats), c_star, l, node_count, norm_cap, diag)


def solve_hybrid(samples, norm_cap: float = DEFAULT_NORM_CAP,
                 tol: SolverTolerances | None = None) -> ScenarioSolution:
    """Solve from hybrid observations: one shape per graph node."""
    rows = rows_from_hybrid(samples)
    return solve_rows(rows, samples.node_count, samples.dimension, samples.l, norm_cap, tol)


def solve_continuous(samples, norm_cap: float = DEFAULT_NORM_CAP,
                     tol: SolverTolerances | None = None) -> ScenarioSolution:
    """Solve from continuous observations: a single common shape."""
    rows = rows_from_continuous(samples)
    return solve_rows(rows, 1, samples.dimension, samples.l, norm_cap, tol)
