"""Labeled directed graphs, switching languages, and path lifts.

A labeled graph constrains which mode sequences a switching system may
follow: the admissible words of length l are exactly the label sequences
read along length-l paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field

Word = tuple[int, ...]


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    label: int


@dataclass(frozen=True)
class LabeledGraph:
    """Directed multigraph on nodes 0..node_count-1 with labels 1..label_count.

    Invariants enforced at construction:
      - node_count >= 1 and every edge endpoint is a valid node index,
      - labels are positive and cover 1..label_count without gaps,
      - every node has at least one outgoing edge (no sinks, so every
        finite word extends),
      - no duplicate (source, target, label) triple.
    """

    node_count: int
    edges: tuple[Edge, ...]
    label_count: int = field(init=False)

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError(f"node_count: must be >= 1, got {self.node_count}")
        if not self.edges:
            raise ValueError("edges: at least one edge required")
        edges = tuple(self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for i, e in enumerate(edges):
            if not (0 <= e.source < self.node_count):
                raise ValueError(f"edges[{i}]: source {e.source} out of range 0..{self.node_count - 1}")
            if not (0 <= e.target < self.node_count):
                raise ValueError(f"edges[{i}]: target {e.target} out of range 0..{self.node_count - 1}")
            if e.label < 1:
                raise ValueError(f"edges[{i}]: label {e.label} must be >= 1")
            key = (e.source, e.target, e.label)
            if key in seen:
                raise ValueError(f"edges[{i}]: duplicate edge {key}")
            seen.add(key)
        m = max(e.label for e in edges)
        present = {e.label for e in edges}
        missing = sorted(set(range(1, m + 1)) - present)
        if missing:
            raise ValueError(f"edges: labels must cover 1..{m} without gaps; missing {missing}")
        object.__setattr__(self, "label_count", m)
        with_out = {e.source for e in edges}
        for u in range(self.node_count):
            if u not in with_out:
                raise ValueError(f"edges: node {u} has no outgoing edge")


def out_edges(g: LabeledGraph) -> tuple[tuple[int, ...], ...]:
    """Edge indices grouped by source node, in edge order."""
    out: list[list[int]] = [[] for _ in range(g.node_count)]
    for i, e in enumerate(g.edges):
        out[e.source].append(i)
    return tuple(tuple(ix) for ix in out)


def _path_triples(g: LabeledGraph, l: int) -> set[tuple[int, int, Word]]:
    """Distinct (start, end, word) triples over length-l paths."""
    if l < 1:
        raise ValueError(f"l: must be >= 1, got {l}")
    cur: set[tuple[int, int, Word]] = {(u, u, ()) for u in range(g.node_count)}
    for _ in range(l):
        nxt: set[tuple[int, int, Word]] = set()
        for start, end, word in cur:
            for e in g.edges:
                if e.source == end:
                    nxt.add((start, e.target, word + (e.label,)))
        cur = nxt
    return cur


def language(g: LabeledGraph, l: int) -> tuple[Word, ...]:
    """All distinct length-l words read along paths, sorted lexicographically."""
    return tuple(sorted({w for _, _, w in _path_triples(g, l)}))


def count_words(g: LabeledGraph, l: int) -> int:
    return len(language(g, l))


@dataclass(frozen=True)
class LiftedGraph:
    """Path lift of a labeled graph at horizon l.

    Same nodes; one edge per distinct (source, target, word) triple over
    length-l paths.  Edge labels are 1-based indexes into `words`, so the
    originating word of any lifted edge is recoverable.
    """

    graph: LabeledGraph
    horizon: int
    words: tuple[Word, ...]

    def word_of(self, edge_index: int) -> Word:
        return self.words[self.graph.edges[edge_index].label - 1]


def product_lift(g: LabeledGraph, l: int) -> LiftedGraph:
    """Lift at horizon l: nodes unchanged, edges are length-l paths.

    Parallel paths reading the same word between the same node pair are
    merged, so the lifted edge count is the number of distinct
    (source, target, word) triples.
    """
    triples = _path_triples(g, l)
    words = tuple(sorted({w for _, _, w in triples}))
    index = {w: k + 1 for k, w in enumerate(words)}
    lifted = tuple(
        Edge(s, t, index[w]) for s, t, w in sorted(triples, key=lambda p: (p[0], p[1], p[2]))
    )
    return LiftedGraph(LabeledGraph(g.node_count, lifted), l, words)


def flower(m: int) -> LabeledGraph:
    """Single node with self-loops 1..m: the unconstrained switching graph."""
    if m < 1:
        raise ValueError(f"m: must be >= 1, got {m}")
    return LabeledGraph(1, tuple(Edge(0, 0, k) for k in range(1, m + 1)))


def cycles_up_to(g: LabeledGraph, max_len: int) -> tuple[tuple[Word, int], ...]:
    """Distinct (word, start node) pairs over closed paths of length <= max_len.

    Closed paths are not required to be simple; repeated traversal of a
    short cycle shows up as a longer word.
    """
    if max_len < 1:
        raise ValueError(f"max_len: must be >= 1, got {max_len}")
    out = out_edges(g)
    found: set[tuple[Word, int]] = set()
    for start in range(g.node_count):
        # stack of (node, word) prefixes rooted at start
        stack: list[tuple[int, Word]] = [(start, ())]
        while stack:
            node, word = stack.pop()
            if len(word) == max_len:
                continue
            for i in out[node]:
                e = g.edges[i]
                w = word + (e.label,)
                if e.target == start:
                    found.add((w, start))
                stack.append((e.target, w))
    return tuple(sorted(found))
