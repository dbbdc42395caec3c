"""Seeded sample generators for the data-driven certificates.

Hybrid sampling observes l-step transitions of the lifted system: a
uniform initial direction on the unit sphere, a uniform lifted edge, and
an additive noise term.  Continuous sampling draws the word uniformly
from the length-l language instead, modelling observations that carry no
graph-state information.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .systems import LiftedSystem, SwitchedSystem, build_lift

NOISE_LAWS = ("uniform-ball", "zero")


@dataclass(frozen=True)
class SamplingConfig:
    l: int
    N: int
    W: float
    seed: int
    noise_law: str = "uniform-ball"

    def __post_init__(self):
        if self.l < 1:
            raise ValueError(f"l: must be >= 1, got {self.l}")
        if self.N < 1:
            raise ValueError(f"N: must be >= 1, got {self.N}")
        if not (self.W >= 0.0 and np.isfinite(self.W)):
            raise ValueError(f"W: must be finite and >= 0, got {self.W}")
        if self.noise_law not in NOISE_LAWS:
            raise ValueError(f"noise_law: expected one of {NOISE_LAWS}, got {self.noise_law!r}")


@dataclass(frozen=True)
class HybridSamples:
    """N observed l-step transitions with graph-state annotations.

    The observation available to the solver is ((x, source), (y, target));
    edge_ids and noises record how each pair was generated and exist for
    validation only.
    """

    xs: np.ndarray
    sources: np.ndarray
    ys: np.ndarray
    targets: np.ndarray
    edge_ids: np.ndarray
    noises: np.ndarray
    l: int
    W: float
    seed: int
    dimension: int
    node_count: int
    lifted_edge_count: int

    @property
    def size(self) -> int:
        return len(self.xs)


@dataclass(frozen=True)
class ContinuousSamples:
    """N observed l-step pairs (x, y) without graph-state annotations."""

    xs: np.ndarray
    ys: np.ndarray
    words: tuple
    noises: np.ndarray
    l: int
    W: float
    seed: int
    dimension: int
    word_count: int

    @property
    def size(self) -> int:
        return len(self.xs)


def unit_sphere(rng, n: int) -> np.ndarray:
    """Uniform direction on the unit sphere via normalized Gaussians."""
    while True:
        z = rng.standard_normal(n)
        nrm = float(np.linalg.norm(z))
        if nrm > 1e-12:
            return z / nrm


def ball_noise(rng, n: int, W: float) -> np.ndarray:
    """Uniform draw from the closed ball of radius W."""
    direction = unit_sphere(rng, n)
    radius = W * float(rng.random()) ** (1.0 / n)
    return radius * direction


def sample_hybrid(
    system: SwitchedSystem, cfg: SamplingConfig, lift: LiftedSystem | None = None
) -> HybridSamples:
    if lift is None:
        lift = build_lift(system, cfg.l)
    elif lift.horizon != cfg.l:
        raise ValueError(f"lift: horizon {lift.horizon} != requested l {cfg.l}")
    n = system.dimension
    E = lift.edge_count
    rng = np.random.default_rng(cfg.seed)
    xs = np.empty((cfg.N, n))
    ys = np.empty((cfg.N, n))
    noises = np.empty((cfg.N, n))
    edge_ids = np.empty(cfg.N, dtype=int)
    for i in range(cfg.N):
        x = unit_sphere(rng, n)
        e = int(rng.integers(E))
        w = ball_noise(rng, n, cfg.W) if cfg.noise_law == "uniform-ball" else np.zeros(n)
        xs[i] = x
        edge_ids[i] = e
        noises[i] = w
        ys[i] = lift.edge_matrix(e) @ x + w
    edges = lift.graph.edges
    sources = np.array([edges[e].source for e in edge_ids], dtype=int)
    targets = np.array([edges[e].target for e in edge_ids], dtype=int)
    for arr in (xs, ys, noises, edge_ids, sources, targets):
        arr.setflags(write=False)
    return HybridSamples(
        xs, sources, ys, targets, edge_ids, noises,
        cfg.l, cfg.W, cfg.seed, n, system.graph.node_count, E,
    )


def sample_continuous(
    system: SwitchedSystem, cfg: SamplingConfig, lift: LiftedSystem | None = None
) -> ContinuousSamples:
    if lift is None:
        lift = build_lift(system, cfg.l)
    elif lift.horizon != cfg.l:
        raise ValueError(f"lift: horizon {lift.horizon} != requested l {cfg.l}")
    n = system.dimension
    words = lift.words
    rng = np.random.default_rng(cfg.seed)
    xs = np.empty((cfg.N, n))
    ys = np.empty((cfg.N, n))
    noises = np.empty((cfg.N, n))
    drawn = []
    for i in range(cfg.N):
        x = unit_sphere(rng, n)
        k = int(rng.integers(len(words)))
        w = ball_noise(rng, n, cfg.W) if cfg.noise_law == "uniform-ball" else np.zeros(n)
        xs[i] = x
        noises[i] = w
        drawn.append(words[k])
        ys[i] = lift.word_matrices[k] @ x + w
    for arr in (xs, ys, noises):
        arr.setflags(write=False)
    return ContinuousSamples(
        xs, ys, tuple(drawn), noises, cfg.l, cfg.W, cfg.seed, n, len(words)
    )


def hybrid_csv(samples: HybridSamples) -> str:
    """One row per sample: index, x components, source, y components, target."""
    n = samples.dimension
    buf = io.StringIO()
    cols = ["index"]
    cols += [f"x{j}" for j in range(n)] + ["u"] + [f"y{j}" for j in range(n)] + ["v"]
    buf.write(",".join(cols) + "\n")
    for i in range(samples.size):
        parts = [str(i)]
        parts += [format(v, ".15g") for v in samples.xs[i]]
        parts.append(str(int(samples.sources[i])))
        parts += [format(v, ".15g") for v in samples.ys[i]]
        parts.append(str(int(samples.targets[i])))
        buf.write(",".join(parts) + "\n")
    return buf.getvalue()


def continuous_csv(samples: ContinuousSamples) -> str:
    """One row per sample: index, x components, y components."""
    n = samples.dimension
    buf = io.StringIO()
    cols = ["index"] + [f"x{j}" for j in range(n)] + [f"y{j}" for j in range(n)]
    buf.write(",".join(cols) + "\n")
    for i in range(samples.size):
        parts = [str(i)]
        parts += [format(v, ".15g") for v in samples.xs[i]]
        parts += [format(v, ".15g") for v in samples.ys[i]]
        buf.write(",".join(parts) + "\n")
    return buf.getvalue()
