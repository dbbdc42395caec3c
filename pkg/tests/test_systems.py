"""Switched systems, word products, lifts, and simulation."""

import numpy as np
import pytest

from switchcert.graphs import Edge, LabeledGraph, language
from switchcert.ncs import A_PLANT, B_INPUT, K_GAIN, ncs_example
from switchcert.systems import build_lift, simulate, step, switched_system, word_matrix

A1 = np.array([[0.0, 1.0], [0.0, 0.0]])  # nilpotent, does not commute with A2
A2 = np.array([[1.0, 0.0], [1.0, 1.0]])


def two_mode_flower():
    g = LabeledGraph(1, (Edge(0, 0, 1), Edge(0, 0, 2)))
    return switched_system(g, [A1, A2])


def test_validation_errors():
    g = LabeledGraph(1, (Edge(0, 0, 1), Edge(0, 0, 2)))
    with pytest.raises(ValueError, match=r"matrices: expected 2 \(one per label\), got 1"):
        switched_system(g, [A1])
    with pytest.raises(ValueError, match=r"matrices\[0\]: expected a square matrix"):
        switched_system(g, [np.zeros((2, 3)), A2])
    with pytest.raises(ValueError, match=r"matrices\[1\]: dimension 3 != 2"):
        switched_system(g, [A1, np.eye(3)])
    with pytest.raises(ValueError, match=r"matrices\[1\]: entries must be finite"):
        switched_system(g, [A1, np.full((2, 2), np.nan)])
    with pytest.raises(ValueError, match="node_names: expected 1 names, got 2"):
        switched_system(g, [A1, A2], node_names=("a", "b"))


def test_matrices_read_only():
    sys = two_mode_flower()
    with pytest.raises(ValueError):
        sys.matrices[0][0, 0] = 5.0


def test_word_matrix_applies_latest_label_leftmost():
    sys = two_mode_flower()
    assert np.allclose(word_matrix(sys, (1,)), A1)
    # word (1, 2): label 1 first, then label 2 applied on the left
    assert np.allclose(word_matrix(sys, (1, 2)), A2 @ A1)
    assert np.allclose(word_matrix(sys, (2, 1)), A1 @ A2)
    assert np.allclose(word_matrix(sys, (1, 2, 2)), A2 @ A2 @ A1)


def test_ncs_example_wiring():
    sys = ncs_example()
    assert sys.dimension == 2
    assert sys.graph.node_count == 3
    assert sys.node_names == ("a", "b", "c")
    closed = np.asarray(A_PLANT) + np.asarray(B_INPUT) @ np.asarray(K_GAIN)
    assert np.allclose(sys.matrices[0], closed)
    assert np.allclose(sys.matrices[1], A_PLANT)
    triples = {(e.source, e.target, e.label) for e in sys.graph.edges}
    assert triples == {(0, 0, 1), (0, 1, 2), (1, 0, 1), (1, 2, 2), (2, 0, 1)}


def test_build_lift_matrices_match_words(ncs):
    for l in (1, 2, 3):
        lift = build_lift(ncs, l)
        assert set(lift.words) == set(language(ncs.graph, l))
        for i, e in enumerate(lift.graph.edges):
            w = lift.words[e.label - 1]
            assert np.allclose(lift.edge_matrix(i), word_matrix(ncs, w))
        assert lift.edge_count == len(lift.graph.edges)
        assert lift.horizon == l


def test_step_respects_graph(ncs):
    rng = np.random.default_rng(0)
    out_by_node = {u: set() for u in range(3)}
    for i, e in enumerate(ncs.graph.edges):
        out_by_node[e.source].add(i)
    for edge in range(len(ncs.graph.edges)):
        tail = ncs.graph.edges[edge].target
        for _ in range(20):
            nxt, y = step(ncs, edge, np.array([1.0, 0.0]), rng)
            assert nxt in out_by_node[tail]
            lab = ncs.graph.edges[nxt].label
            assert np.allclose(y, ncs.matrices[lab - 1] @ np.array([1.0, 0.0]))
    with pytest.raises(ValueError, match="current_edge"):
        step(ncs, 99, np.array([1.0, 0.0]), rng)


def test_simulate_shapes_and_consistency(ncs):
    rng = np.random.default_rng(5)
    edges, states = simulate(ncs, 40, np.array([1.0, 0.0]), rng, start_edge=0)
    assert edges.shape == (40,) and states.shape == (41, 2)
    for k in range(40):
        lab = ncs.graph.edges[edges[k]].label
        assert np.allclose(states[k + 1], ncs.matrices[lab - 1] @ states[k])
        if k:
            assert ncs.graph.edges[edges[k]].source == ncs.graph.edges[edges[k - 1]].target
    with pytest.raises(ValueError, match="steps"):
        simulate(ncs, -1, np.array([1.0, 0.0]), rng)
    with pytest.raises(ValueError, match="x0"):
        simulate(ncs, 1, np.array([1.0, 0.0, 0.0]), rng)


def test_downsampled_trajectory_follows_lift(ncs):
    """Every l-step window of a trajectory is an edge of the horizon-l lift."""
    l, blocks = 3, 12
    lift = build_lift(ncs, l)
    lift_triples = {
        (e.source, e.target, lift.words[e.label - 1]) for e in lift.graph.edges
    }
    rng = np.random.default_rng(17)
    edges, states = simulate(ncs, l * blocks, np.array([0.3, -1.1]), rng, start_edge=0)
    g = ncs.graph
    for j in range(blocks):
        window = edges[j * l : (j + 1) * l]
        word = tuple(g.edges[i].label for i in window)
        source = g.edges[window[0]].source
        target = g.edges[window[-1]].target
        assert (source, target, word) in lift_triples
        assert np.allclose(
            states[(j + 1) * l], word_matrix(ncs, word) @ states[j * l], atol=1e-12
        )
