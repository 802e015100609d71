"""Labeled multi-relational graphs: construction, TSV/JSON ingestion, the
single-relation union view, and a brute-force isomorphism oracle.

Graphs are undirected, self-loop free, and immutable after construction.
Internally each graph is a flat CSR triple (indptr, nbr, rel) sorted per
vertex by (relation, neighbor); the arrays are marked read-only so instances
can be shared freely across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, ContractViolation, GraphFormatError

ISO_CAP_DEFAULT = 10


def _build_csr(n, us, rs, vs):
    """Sort directed entries by (vertex, relation, neighbor) and return CSR."""
    order = np.lexsort((vs, rs, us))
    us, rs, vs = us[order], rs[order], vs[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, us + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, vs, rs


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


class MultiRelGraph:
    """Undirected vertex-labeled graph with `r` edge relations.

    Vertices are dense ids 0..n-1.  Every undirected edge {u, v} of relation
    i is stored twice ((u, i, v) and (v, i, u)); per-vertex entries are
    sorted by (relation, neighbor).  Invariants enforced at construction:
    symmetry, no self-loops, no duplicate (u, i, v), ids in range, labels
    non-negative.
    """

    __slots__ = ("n", "r", "labels", "indptr", "nbr", "rel", "_edge_lookup")

    def __init__(self, n, r, triples, labels=None):
        """`triples` is an iterable of (u, relation, v), one per undirected edge."""
        triples = np.asarray(list(triples) if not isinstance(triples, np.ndarray) else triples, dtype=np.int64)
        if triples.size == 0:
            triples = triples.reshape(0, 3)
        if triples.ndim != 2 or triples.shape[1] != 3:
            raise ContractViolation("edge triples must be (u, relation, v)")
        self._init_from_arrays(n, r, triples, labels)

    def _init_from_arrays(self, n, r, triples, labels):
        if n < 0 or r < 0:
            raise ContractViolation("vertex and relation counts must be non-negative")
        us, rs, vs = triples[:, 0], triples[:, 1], triples[:, 2]
        if triples.size:
            if us.min() < 0 or vs.min() < 0 or max(us.max(), vs.max()) >= n:
                raise GraphFormatError("vertex id out of range")
            if rs.min() < 0 or rs.max() >= r:
                raise GraphFormatError("relation id out of range")
            if (us == vs).any():
                raise GraphFormatError("self-loops are not allowed")
            lo, hi = np.minimum(us, vs), np.maximum(us, vs)
            key = (rs * n + lo) * n + hi
            if np.unique(key).size != key.size:
                raise GraphFormatError("duplicate edge within a relation")
        if labels is None:
            labels = np.zeros(n, dtype=np.int64)
        else:
            labels = np.asarray(labels, dtype=np.int64).copy()
            if labels.shape != (n,):
                raise ContractViolation(f"labels must have length {n}")
            if n and labels.min() < 0:
                raise GraphFormatError("labels must be non-negative")
        both_u = np.concatenate([us, vs])
        both_r = np.concatenate([rs, rs])
        both_v = np.concatenate([vs, us])
        indptr, nbr, rel = _build_csr(n, both_u, both_r, both_v)
        self.n = int(n)
        self.r = int(r)
        self.labels = labels
        self.indptr, self.nbr, self.rel = indptr, nbr, rel
        self._edge_lookup = None
        _freeze(labels, indptr, nbr, rel)

    @classmethod
    def from_relations(cls, n, relation_edges, labels=None):
        """Build from one (u, v) edge list per relation."""
        triples = [(u, i, v) for i, edges in enumerate(relation_edges) for (u, v) in edges]
        return cls(n, len(relation_edges), triples, labels)

    @property
    def edge_count(self):
        return self.nbr.shape[0] // 2

    def neighbors(self, v, relation=None):
        """Sorted neighbor ids of v, optionally restricted to one relation."""
        lo, hi = self.indptr[v], self.indptr[v + 1]
        if relation is None:
            return self.nbr[lo:hi]
        rels = self.rel[lo:hi]
        a = lo + np.searchsorted(rels, relation, side="left")
        b = lo + np.searchsorted(rels, relation, side="right")
        return self.nbr[a:b]

    def degree_vector(self, v):
        """Per-relation neighbor counts |N_i(v)|."""
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return np.bincount(self.rel[lo:hi], minlength=self.r).astype(np.int64)

    def relation_edges(self, i):
        """Undirected edges of relation i as sorted (u, v) pairs with u < v."""
        mask = self.rel == i
        us = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))[mask]
        vs = self.nbr[mask]
        keep = us < vs
        return sorted(zip(us[keep].tolist(), vs[keep].tolist()))

    def has_edge(self, u, v, relation):
        if self._edge_lookup is None:
            us = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
            self._edge_lookup = set(zip(us.tolist(), self.rel.tolist(), self.nbr.tolist()))
        return (u, relation, v) in self._edge_lookup

    def __eq__(self, other):
        if not isinstance(other, MultiRelGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.r == other.r
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.nbr, other.nbr)
            and np.array_equal(self.rel, other.rel)
        )

    def __repr__(self):
        return f"MultiRelGraph(n={self.n}, r={self.r}, edges={self.edge_count})"


class LabeledGraph:
    """Single-relation view: undirected vertex-labeled graph."""

    __slots__ = ("n", "labels", "indptr", "nbr", "_edge_lookup")

    def __init__(self, n, edges, labels=None):
        edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if edges.size == 0:
            edges = edges.reshape(0, 2)
        if edges.ndim != 2 or edges.shape[1] != 2:
            raise ContractViolation("edges must be (u, v) pairs")
        us, vs = edges[:, 0], edges[:, 1]
        if edges.size:
            if us.min() < 0 or vs.min() < 0 or max(us.max(), vs.max()) >= n:
                raise GraphFormatError("vertex id out of range")
            if (us == vs).any():
                raise GraphFormatError("self-loops are not allowed")
            lo, hi = np.minimum(us, vs), np.maximum(us, vs)
            if np.unique(lo * n + hi).size != lo.size:
                raise GraphFormatError("duplicate edge")
        if labels is None:
            labels = np.zeros(n, dtype=np.int64)
        else:
            labels = np.asarray(labels, dtype=np.int64).copy()
            if labels.shape != (n,):
                raise ContractViolation(f"labels must have length {n}")
            if n and labels.min() < 0:
                raise GraphFormatError("labels must be non-negative")
        both_u = np.concatenate([us, vs])
        both_v = np.concatenate([vs, us])
        indptr, nbr, _ = _build_csr(n, both_u, np.zeros_like(both_u), both_v)
        self.n = int(n)
        self.labels = labels
        self.indptr, self.nbr = indptr, nbr
        self._edge_lookup = None
        _freeze(labels, indptr, nbr)

    @property
    def edge_count(self):
        return self.nbr.shape[0] // 2

    def neighbors(self, v):
        return self.nbr[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v):
        return int(self.indptr[v + 1] - self.indptr[v])

    def edges(self):
        us = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        keep = us < self.nbr
        return sorted(zip(us[keep].tolist(), self.nbr[keep].tolist()))

    def has_edge(self, u, v):
        if self._edge_lookup is None:
            us = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
            self._edge_lookup = set(zip(us.tolist(), self.nbr.tolist()))
        return (u, v) in self._edge_lookup

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.nbr, other.nbr)
        )

    def __repr__(self):
        return f"LabeledGraph(n={self.n}, edges={self.edge_count})"


@dataclass
class LoadResult:
    """A parsed graph plus the token tables assigned by first occurrence."""

    graph: MultiRelGraph
    vertex_tokens: list
    relation_tokens: list


def load_graph(edges_path, labels_path=None):
    """Parse an edge TSV (src<TAB>rel<TAB>dst) and optional label TSV.

    String tokens become dense ids by first occurrence.  Lines starting with
    '#' are skipped.  Malformed lines, self-loops, and duplicate edges (in
    either orientation) are rejected with their line number.
    """
    vertex_ids, relation_ids = {}, {}
    triples, seen = [], set()
    with open(edges_path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise GraphFormatError(f"expected 3 tab-separated fields, got {len(parts)}", line=lineno)
            src, rel, dst = parts
            if src == dst:
                raise GraphFormatError(f"self-loop on vertex {src!r}", line=lineno)
            u = vertex_ids.setdefault(src, len(vertex_ids))
            i = relation_ids.setdefault(rel, len(relation_ids))
            v = vertex_ids.setdefault(dst, len(vertex_ids))
            key = (i, u, v) if u < v else (i, v, u)
            if key in seen:
                raise GraphFormatError(f"duplicate edge {src!r} {rel!r} {dst!r}", line=lineno)
            seen.add(key)
            triples.append((u, i, v))
    n = len(vertex_ids)
    labels = np.zeros(n, dtype=np.int64)
    if labels_path is not None:
        seen_vertices = set()
        with open(labels_path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.rstrip("\r\n")
                if line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise GraphFormatError(f"expected 2 tab-separated fields, got {len(parts)}", line=lineno)
                token, value = parts
                if token not in vertex_ids:
                    raise GraphFormatError(f"unknown vertex {token!r}", line=lineno)
                if token in seen_vertices:
                    raise GraphFormatError(f"duplicate label for vertex {token!r}", line=lineno)
                seen_vertices.add(token)
                try:
                    lab = int(value)
                except ValueError:
                    lab = -1
                if lab < 0:
                    raise GraphFormatError(f"label must be a non-negative integer, got {value!r}", line=lineno)
                labels[vertex_ids[token]] = lab
    graph = MultiRelGraph(n, len(relation_ids), triples, labels)
    return LoadResult(graph, list(vertex_ids), list(relation_ids))


def write_edge_tsv(graph, path, vertex_tokens=None, relation_tokens=None):
    """Write a graph back to edge-TSV form, one line per undirected edge.

    A plain labeled graph is written as its single-relation view.
    """
    per_relation = ([graph.edges()] if isinstance(graph, LabeledGraph)
                    else [graph.relation_edges(i) for i in range(graph.r)])
    if vertex_tokens is None:
        vertex_tokens = [str(v) for v in range(graph.n)]
    if relation_tokens is None:
        relation_tokens = [f"r{i}" for i in range(len(per_relation))]
    with open(path, "w", encoding="utf-8") as fh:
        for i, edges in enumerate(per_relation):
            for u, v in edges:
                fh.write(f"{vertex_tokens[u]}\t{relation_tokens[i]}\t{vertex_tokens[v]}\n")


def write_label_tsv(graph, path, vertex_tokens=None):
    if vertex_tokens is None:
        vertex_tokens = [str(v) for v in range(graph.n)]
    with open(path, "w", encoding="utf-8") as fh:
        for v in range(graph.n):
            fh.write(f"{vertex_tokens[v]}\t{int(graph.labels[v])}\n")


def graph_to_json(graph):
    """Canonical JSON dict: {n, r, labels, relations} with u < v per edge.

    A plain labeled graph serializes as its single-relation view.
    """
    if isinstance(graph, LabeledGraph):
        relations = [[list(e) for e in graph.edges()]]
        r = 1
    else:
        relations = [[list(e) for e in graph.relation_edges(i)] for i in range(graph.r)]
        r = graph.r
    return {"n": graph.n, "r": r, "labels": graph.labels.tolist(), "relations": relations}


def graph_from_json(data):
    return MultiRelGraph.from_relations(data["n"], data["relations"], data["labels"])


def dump_graph_json(graph, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_json(graph), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def union_graph(graph):
    """Single-relation view: edge set is the union over all relations.

    Plain color refinement ignores relation tags, so this is the graph it
    runs on.  Labels are preserved; duplicate pairs across relations collapse.
    """
    pairs = set()
    for i in range(graph.r):
        pairs.update(graph.relation_edges(i))
    return LabeledGraph(graph.n, sorted(pairs), graph.labels)


def permute_graph(graph, perm):
    """Relabel vertices by v -> perm[v], carrying labels and relations along."""
    perm = np.asarray(perm, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(graph.n)):
        raise ContractViolation("perm must be a permutation of 0..n-1")
    labels = np.empty(graph.n, dtype=np.int64)
    labels[perm] = graph.labels
    triples = []
    for i in range(graph.r):
        for u, v in graph.relation_edges(i):
            triples.append((int(perm[u]), i, int(perm[v])))
    return MultiRelGraph(graph.n, graph.r, triples, labels)


def _as_relational(g):
    """View either graph type as (n, r, labels, per-relation edge sets)."""
    if isinstance(g, MultiRelGraph):
        return g.n, g.r, g.labels, [set(map(tuple, g.relation_edges(i))) for i in range(g.r)]
    return g.n, 1, g.labels, [set(map(tuple, g.edges()))]


def brute_force_isomorphic(g, h, cap=ISO_CAP_DEFAULT):
    """Ground-truth isomorphism test by pruned permutation search.

    Vertices are matched only within equal (label, per-relation degree)
    classes before the backtracking search.  Factorial worst case; refuses
    above `cap` vertices.  Vertex- or relation-count mismatch returns False.
    """
    gn, gr, glab, gedges = _as_relational(g)
    hn, hr, hlab, hedges = _as_relational(h)
    if gn != hn or gr != hr:
        return False
    if gn > cap:
        raise CapExceeded(f"isomorphism search capped at n={cap}, got n={gn}")

    def invariant(n, labels, edge_sets, v):
        degs = tuple(sum(1 for (a, b) in es if a == v or b == v) for es in edge_sets)
        return (int(labels[v]), degs)

    ginv = [invariant(gn, glab, gedges, v) for v in range(gn)]
    hinv = [invariant(hn, hlab, hedges, v) for v in range(hn)]
    if sorted(ginv) != sorted(hinv):
        return False

    gadj = [set() for _ in range(gr)]
    hadj = [set() for _ in range(hr)]
    for i in range(gr):
        for u, v in gedges[i]:
            gadj[i].update({(u, v), (v, u)})
        for u, v in hedges[i]:
            hadj[i].update({(u, v), (v, u)})

    candidates = [[w for w in range(hn) if hinv[w] == ginv[v]] for v in range(gn)]
    order = sorted(range(gn), key=lambda v: len(candidates[v]))
    mapping = [-1] * gn
    used = [False] * hn

    def backtrack(pos):
        if pos == gn:
            return True
        v = order[pos]
        for w in candidates[v]:
            if used[w]:
                continue
            ok = True
            for prev in order[:pos]:
                pw = mapping[prev]
                for i in range(gr):
                    if ((v, prev) in gadj[i]) != ((w, pw) in hadj[i]):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                mapping[v] = w
                used[w] = True
                if backtrack(pos + 1):
                    return True
                mapping[v] = -1
                used[w] = False
        return False

    return backtrack(0)
