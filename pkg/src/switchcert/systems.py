"""Constrained switching linear systems and their path lifts.

A system pairs a labeled graph with one matrix per label.  Admissible
trajectories follow edges of the graph and apply the matrix of each
traversed label; the lift at horizon l exposes the l-step products as a
switching system over the same nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import LabeledGraph, Word, out_edges, product_lift


@dataclass(frozen=True)
class SwitchedSystem:
    graph: LabeledGraph
    matrices: tuple[np.ndarray, ...]
    dimension: int
    node_names: tuple[str, ...] | None = None


def switched_system(
    graph: LabeledGraph,
    matrices,
    node_names: tuple[str, ...] | None = None,
) -> SwitchedSystem:
    """Validate and freeze a (graph, matrices) pair into a SwitchedSystem."""
    mats = []
    n = None
    for k, M in enumerate(matrices):
        A = np.array(M, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"matrices[{k}]: expected a square matrix, got shape {A.shape}")
        if n is None:
            n = A.shape[0]
        elif A.shape[0] != n:
            raise ValueError(f"matrices[{k}]: dimension {A.shape[0]} != {n}")
        if not np.all(np.isfinite(A)):
            raise ValueError(f"matrices[{k}]: entries must be finite")
        A.setflags(write=False)
        mats.append(A)
    if len(mats) != graph.label_count:
        raise ValueError(
            f"matrices: expected {graph.label_count} (one per label), got {len(mats)}"
        )
    if node_names is not None and len(node_names) != graph.node_count:
        raise ValueError(
            f"node_names: expected {graph.node_count} names, got {len(node_names)}"
        )
    return SwitchedSystem(graph, tuple(mats), int(n), node_names)


def word_matrix(system: SwitchedSystem, word: Word) -> np.ndarray:
    """Product along a word: the last label applied acts leftmost."""
    M = system.matrices[word[0] - 1]
    for label in word[1:]:
        M = system.matrices[label - 1] @ M
    return M


@dataclass(frozen=True)
class LiftedSystem:
    """Horizon-l lift: lifted graph plus one l-step product per word."""

    base: SwitchedSystem
    horizon: int
    graph: LabeledGraph
    words: tuple[Word, ...]
    word_matrices: tuple[np.ndarray, ...]

    @property
    def edge_count(self) -> int:
        return len(self.graph.edges)

    def edge_matrix(self, edge_index: int) -> np.ndarray:
        return self.word_matrices[self.graph.edges[edge_index].label - 1]


def build_lift(system: SwitchedSystem, l: int) -> LiftedSystem:
    lifted = product_lift(system.graph, l)
    mats = []
    for w in lifted.words:
        M = word_matrix(system, w)
        M.setflags(write=False)
        mats.append(M)
    return LiftedSystem(system, l, lifted.graph, lifted.words, tuple(mats))


def step(system: SwitchedSystem, current_edge: int, x: np.ndarray, rng) -> tuple[int, np.ndarray]:
    """One admissible transition from the state reached along current_edge.

    The next edge is drawn uniformly among edges leaving the current
    edge's target; the drawn label's matrix is applied to x.
    """
    g = system.graph
    if not (0 <= current_edge < len(g.edges)):
        raise ValueError(f"current_edge: index {current_edge} out of range")
    successors = out_edges(g)[g.edges[current_edge].target]
    nxt = successors[int(rng.integers(len(successors)))]
    label = g.edges[nxt].label
    return nxt, system.matrices[label - 1] @ np.asarray(x, dtype=float)


def simulate(
    system: SwitchedSystem,
    steps: int,
    x0: np.ndarray,
    rng,
    start_edge: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulate `steps` transitions; returns (edge indices, states).

    states[0] is x0 and states[k] the state after k transitions; edges[k]
    is the edge traversed between states[k] and states[k+1].
    """
    if steps < 0:
        raise ValueError(f"steps: must be >= 0, got {steps}")
    x = np.array(x0, dtype=float)
    if x.shape != (system.dimension,):
        raise ValueError(f"x0: expected shape ({system.dimension},), got {x.shape}")
    edge = (
        int(rng.integers(len(system.graph.edges))) if start_edge is None else int(start_edge)
    )
    edges = np.empty(steps, dtype=int)
    states = np.empty((steps + 1, system.dimension))
    states[0] = x
    for k in range(steps):
        edge, x = step(system, edge, x, rng)
        edges[k] = edge
        states[k + 1] = x
    return edges, states
