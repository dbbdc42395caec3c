"""Model-based reference values: certified upper bounds and cycle lower bounds.

These need the matrices themselves (no sampling) and bracket the true
constrained joint spectral radius, so data-driven certificates can be
judged against them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import flower
from .solver import SolverTolerances, constraint_rows, feasibility
from .symmat import sym_eig
from .systems import SwitchedSystem, build_lift

GAMMA_TOL = 1e-4
CUT_TOL = 1e-7
CUT_CAP = 500


@dataclass(frozen=True)
class BaselineReport:
    l: int
    cycle_max: int
    lower: float
    upper: float
    upper_reduction: float

    @property
    def width(self) -> float:
        return min(self.upper, self.upper_reduction) - self.lower


def spectral_radius(M: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(M, dtype=float)))))


def cycle_lower(system: SwitchedSystem, max_len: int = 12) -> float:
    """Largest averaged spectral radius over closed-path products.

    Every closed path of length k gives rho(A_word)^(1/k) <= true radius;
    the maximum over all closed paths up to max_len is reported.
    """
    from .graphs import cycles_up_to
    from .systems import word_matrix

    best = 0.0
    seen: set = set()
    for word, _ in cycles_up_to(system.graph, max_len):
        if word in seen:
            continue
        seen.add(word)
        rho = spectral_radius(word_matrix(system, word))
        best = max(best, rho ** (1.0 / len(word)))
    return best


def _cut_direction(S: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and unit eigenvector of the slack matrix."""
    w, V = sym_eig(S)
    return float(w[0]), np.asarray(V)[:, 0]


def _lmi_feasible(
    edges: list[tuple[int, int, np.ndarray]],
    gamma_l: float,
    node_count: int,
    dim: int,
    cuts: list[list[np.ndarray]],
    tol: SolverTolerances,
) -> np.ndarray | None:
    """Decide A_e' P_t A_e <= gamma_l^2 P_s for all e via cutting planes.

    Each round solves the halfspace relaxation built from the accumulated
    unit directions, then adds the most violated eigen-direction of every
    still-violated edge.  Conservative on cut-budget exhaustion.
    """
    factor = gamma_l * gamma_l
    cut_floor = max(CUT_TOL, 2.0 * tol.slack * tol.feas_tol)
    point = None
    for _ in range(CUT_CAP):
        srcs, tgts, xs, ys = [], [], [], []
        for k, (s, t, A) in enumerate(edges):
            for x in cuts[k]:
                srcs.append(s)
                tgts.append(t)
                xs.append(x)
                ys.append(A @ x)
        rows = constraint_rows(
            np.array(srcs, dtype=int),
            np.array(tgts, dtype=int),
            np.array(xs, dtype=float).reshape(len(xs), dim),
            np.array(ys, dtype=float).reshape(len(ys), dim),
        ) if xs else constraint_rows(
            np.zeros(0, dtype=int), np.zeros(0, dtype=int),
            np.zeros((0, dim)), np.zeros((0, dim)),
        )
        point = feasibility(rows, gamma_l, node_count, dim, 1, tol=tol, start=point)
        if point is None:
            return None
        worst_new = 0
        for k, (s, t, A) in enumerate(edges):
            S = factor * point[s] - A.T @ point[t] @ A
            lo, v = _cut_direction(S)
            if lo < -cut_floor:
                if len(cuts[k]) >= CUT_CAP:
                    return None
                cuts[k].append(v)
                worst_new += 1
        if worst_new == 0:
            return point
    return None


def certified_rate(
    edges: list[tuple[int, int, np.ndarray]],
    node_count: int,
    dim: int,
    l: int,
    gamma_tol: float = GAMMA_TOL,
) -> float:
    """Smallest gamma (within gamma_tol) with node-wise quadratic norms
    contracting every edge matrix by gamma^l, reported per base step."""
    # near-critical probes converge slowly, so the LMI engine gets a far
    # larger sweep budget and a wider stagnation window than the default
    tol = SolverTolerances(feas_tol=1e-8, max_sweeps=10000, stagnation_window=1000)
    norms = [float(np.linalg.norm(A, ord=2)) for _, _, A in edges]
    top = max(norms)
    if top == 0.0:
        return 0.0
    hi = top ** (1.0 / l) * (1.0 + 1e-9)
    lo = 0.0
    # persistent cut directions: seeded with each edge's top singular direction
    cuts: list[list[np.ndarray]] = []
    for _, _, A in edges:
        _, _, Vt = np.linalg.svd(A)
        cuts.append([Vt[0]])
    while hi - lo > gamma_tol:
        mid = 0.5 * (lo + hi)
        if _lmi_feasible(edges, mid**l, node_count, dim, cuts, tol) is not None:
            hi = mid
        else:
            lo = mid
    return hi


def whitebox_upper(
    system: SwitchedSystem, l: int = 1, gamma_tol: float = GAMMA_TOL
) -> float:
    """Certified upper bound via the horizon-l lift of the full graph."""
    lift = build_lift(system, l)
    edges = [
        (e.source, e.target, lift.word_matrices[e.label - 1]) for e in lift.graph.edges
    ]
    return certified_rate(edges, system.graph.node_count, system.dimension, l, gamma_tol)


def arbitrary_reduction_upper(
    system: SwitchedSystem, l: int = 1, gamma_tol: float = GAMMA_TOL
) -> float:
    """Certified upper bound after forgetting the graph.

    The distinct l-step word products are re-read as an unconstrained
    switching system on one node (a flower with one loop per word); its
    certified rate still upper-bounds the constrained radius and tends to
    it as l grows.
    """
    lift = build_lift(system, l)
    edges = [(0, 0, M) for M in lift.word_matrices]
    return certified_rate(edges, 1, system.dimension, l, gamma_tol)


def baseline_report(
    system: SwitchedSystem,
    l: int,
    cycle_max: int = 12,
    gamma_tol: float = GAMMA_TOL,
) -> BaselineReport:
    return BaselineReport(
        l,
        cycle_max,
        cycle_lower(system, cycle_max),
        whitebox_upper(system, l, gamma_tol),
        arbitrary_reduction_upper(system, l, gamma_tol),
    )
