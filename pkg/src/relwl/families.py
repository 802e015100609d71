"""Deterministic generators for the separating graph families, the
distance-two-clique witness finder, and seeded random graphs for the
statistical suites.

All generators are pure: the same parameters produce byte-identical
serialized graphs.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, ContractViolation
from .graphs import LabeledGraph, MultiRelGraph

CLIQUE_SEARCH_CAP = 5_000_000

FAMILIES = ("prop3", "cycle-pair", "gk-hk", "lifted")


@dataclass(frozen=True)
class FamilySpec:
    """Which separating family to build, with its order and relation count."""

    family: str
    k: int = 2
    r: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ContractViolation(f"unknown family {self.family!r}")
        if self.family in ("gk-hk", "lifted") and self.k < 2:
            raise ContractViolation(f"family {self.family} requires k >= 2")
        if self.r < 1:
            raise ContractViolation("relation count must be >= 1")

    def generate(self):
        """The family's graphs as a tuple (one graph for prop3, two otherwise)."""
        if self.family == "prop3":
            return (gen_prop3(),)
        if self.family == "cycle-pair":
            return gen_cycle_pair(self.r)
        if self.family == "gk-hk":
            return gen_gk_hk(self.k)
        return gen_lifted(self.k, self.r)


def gen_prop3() -> MultiRelGraph:
    """Four-vertex, two-relation swap witness.

    Vertices v, w, u1, u2 = ids 0..3.  Relation 0 joins v-u1 and w-u2,
    relation 1 joins v-u2 and w-u1; labels are 0, 0, 1, 2.  Relation-tagged
    refinement separates v from w after one round, while the weak variant
    sees identical neighborhoods forever.
    """
    relations = [
        [(0, 2), (1, 3)],
        [(0, 3), (1, 2)],
    ]
    return MultiRelGraph.from_relations(4, relations, labels=[0, 0, 1, 2])


def gen_cycle_pair(r):
    """Six-cycle versus two triangles, every relation carrying the full edge set.

    The two graphs are non-isomorphic but plain refinement (and therefore the
    relational variant, since all relations coincide) cannot tell them apart.
    """
    if r < 1:
        raise ContractViolation("relation count must be >= 1")
    c6 = [(i, (i + 1) % 6) for i in range(6)]
    c6 = sorted((min(u, v), max(u, v)) for u, v in c6)
    two_c3 = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    two_c3 = sorted(two_c3)
    g = MultiRelGraph.from_relations(6, [c6] * r)
    h = MultiRelGraph.from_relations(6, [two_c3] * r)
    return g, h


def _even_odd_family(k):
    """Base clique data for the subset construction: edges and incidences."""
    base_vertices = list(range(k + 1))
    base_edges = sorted(itertools.combinations(base_vertices, 2))
    incident = {v: [e for e in base_edges if v in e] for v in base_vertices}
    return base_vertices, base_edges, incident


def _subset_graph(k, odd_at_zero):
    """Shared construction for the hierarchy pair.

    Pair vertices (v, S) take every subset S of the edges at v with even
    cardinality; when `odd_at_zero` is set, base vertex 0 uses the odd
    subsets instead.  Each base edge e contributes two vertices e^0 and e^1
    joined by an edge; (v, S) attaches to e^1 when e is in S and to e^0 when
    e is incident to v but outside S.  Vertex order is deterministic: pair
    vertices by (base vertex, subset bitmask), then edge vertices by
    (edge index, superscript).
    """
    base_vertices, base_edges, incident = _even_odd_family(k)
    pair_vertices = []
    for v in base_vertices:
        edges_at_v = incident[v]
        want_odd = odd_at_zero and v == 0
        for mask in range(1 << len(edges_at_v)):
            parity = bin(mask).count("1") % 2
            if parity == (1 if want_odd else 0):
                pair_vertices.append((v, mask))
    ids = {}
    for pv in pair_vertices:
        ids[("pair",) + pv] = len(ids)
    for idx, e in enumerate(base_edges):
        ids[("edge", idx, 0)] = len(ids)
        ids[("edge", idx, 1)] = len(ids)
    edges = []
    for idx, _ in enumerate(base_edges):
        edges.append((ids[("edge", idx, 0)], ids[("edge", idx, 1)]))
    edge_index = {e: i for i, e in enumerate(base_edges)}
    for v, mask in pair_vertices:
        pid = ids[("pair", v, mask)]
        for pos, e in enumerate(incident[v]):
            superscript = 1 if mask & (1 << pos) else 0
            edges.append((pid, ids[("edge", edge_index[e], superscript)]))
    return LabeledGraph(len(ids), sorted((min(a, b), max(a, b)) for a, b in edges))


def gen_gk_hk(k):
    """The even/odd-subset hierarchy pair over the complete graph K_{k+1}.

    The two graphs have identical vertex and edge counts and identical plain
    refinement behavior, yet only the first contains a distance-two-clique
    of size k+1, so they are non-isomorphic.
    """
    if k < 2:
        raise ContractViolation("hierarchy pair requires k >= 2")
    return _subset_graph(k, odd_at_zero=False), _subset_graph(k, odd_at_zero=True)


def gen_lifted(k, r):
    """Relational lift of the hierarchy pair: every relation is the full edge set."""
    if r < 1:
        raise ContractViolation("relation count must be >= 1")
    g, h = gen_gk_hk(k)
    return (
        MultiRelGraph.from_relations(g.n, [g.edges()] * r, g.labels),
        MultiRelGraph.from_relations(h.n, [h.edges()] * r, h.labels),
    )


def _bfs_distances(graph, source):
    dist = [-1] * graph.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in graph.neighbors(v).tolist():
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def find_distance_two_clique(graph, size, cap=CLIQUE_SEARCH_CAP):
    """Smallest (lexicographic) vertex set of `size` with pairwise distance
    exactly two, or None.

    Distances are exact BFS shortest paths.  The subset search refuses when
    C(n, size) exceeds `cap`.
    """
    if size < 2:
        raise ContractViolation("witness size must be >= 2")
    n = graph.n
    if size > n:
        return None
    if math.comb(n, size) > cap:
        raise CapExceeded(f"C({n},{size}) exceeds the subset search cap {cap}")
    dist = [_bfs_distances(graph, v) for v in range(n)]
    at_two = [[u for u in range(n) if dist[v][u] == 2] for v in range(n)]

    def extend(chosen, last):
        if len(chosen) == size:
            return list(chosen)
        for u in at_two[chosen[-1]]:
            if u <= last:
                continue
            if all(dist[c][u] == 2 for c in chosen):
                chosen.append(u)
                found = extend(chosen, u)
                if found:
                    return found
                chosen.pop()
        return None

    for v in range(n):
        found = extend([v], v)
        if found:
            return found
    return None


def random_multirel(rng, n, r, edge_prob, max_labels=3):
    """Random labeled multi-relational graph from a numpy Generator.

    Each unordered pair joins each relation independently with probability
    `edge_prob`; labels are uniform over 0..max_labels-1.  Deterministic for
    a given generator state.
    """
    triples = []
    for i in range(r):
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < edge_prob:
                    triples.append((u, i, v))
    labels = rng.integers(0, max(1, max_labels), size=n)
    return MultiRelGraph(n, r, triples, labels)


def random_permutation(rng, n):
    return rng.permutation(n).astype(np.int64)


def random_multirel_exact(rng, n, edges, r, max_labels=1):
    """Random graph with an exact undirected edge count, built vectorized.

    Oversamples candidate (u, relation, v) triples, normalizes orientation,
    deduplicates, and keeps the first `edges` unique entries; resamples until
    enough distinct triples exist.  Intended for large smoke tests where the
    per-edge Python loop of `random_multirel` would dominate.
    """
    if edges > r * n * (n - 1) // 2:
        raise ContractViolation("requested more edges than distinct pairs exist")
    chosen = np.empty(0, dtype=np.int64)
    while chosen.size < edges:
        batch = max(edges - chosen.size, 1) * 2
        us = rng.integers(0, n, size=batch, dtype=np.int64)
        vs = rng.integers(0, n, size=batch, dtype=np.int64)
        rel = rng.integers(0, r, size=batch, dtype=np.int64)
        keep = us != vs
        lo = np.minimum(us[keep], vs[keep])
        hi = np.maximum(us[keep], vs[keep])
        key = (rel[keep] * n + lo) * n + hi
        chosen = np.unique(np.concatenate([chosen, key]))
    # np.unique sorts; re-draw a deterministic subset of the right size
    chosen = chosen[rng.permutation(chosen.size)[:edges]]
    rel, rest = np.divmod(chosen, n * n)
    lo, hi = np.divmod(rest, n)
    triples = np.column_stack([lo, rel, hi])
    labels = rng.integers(0, max(1, max_labels), size=n)
    return MultiRelGraph(n, r, triples, labels)
