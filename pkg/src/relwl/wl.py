"""Color-refinement engine: vertex and k-tuple variants, stable-coloring
loops, and the parallel two-graph distinguishing run.

Update rules
------------
plain (1wl)          own color + sorted multiset of neighbor colors
relational (1rwl)    own color + sorted multiset of (neighbor color, relation)
weak                 own color + sorted multiset of neighbor colors (one entry
                     per incident relation edge) + per-relation degree counts
krlwl                k-tuple colors; per position j the sorted multiset of
                     (color of the j-substituted tuple, relation) over the
                     relation neighbors of the j-th component
delta-klwl           single-relation krlwl on a plain labeled graph
oblivious-kwl        like delta-klwl but substituting every vertex, not just
                     neighbors of the j-th component

Relabeling is a hash table over canonical byte signatures; fresh ids are
issued by first occurrence under the canonical scan (graph 0 before graph 1,
ascending vertex/tuple index), so two runs over identical inputs produce
identical color sequences.  Every refinement round uses a fresh dictionary,
which keeps color ids dense in 0..class_count-1; signatures embed the
previous round's color, so refinement is monotone regardless.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as kernels
from .errors import CapExceeded, ContractViolation
from .graphs import LabeledGraph, MultiRelGraph

TUPLE_ENTRY_CAP = 20_000_000

VERTEX_VARIANTS = ("1wl", "1rwl", "weak")
TUPLE_VARIANTS = ("krlwl", "delta-klwl", "oblivious-kwl")
VARIANTS = VERTEX_VARIANTS + TUPLE_VARIANTS


class ColorDictionary:
    """Injective signature -> fresh color id store (the relabeling table).

    Ids are issued in ascending order of first occurrence, starting at 0.
    Shared across two graphs inside one refinement round when distinguishing.
    """

    __slots__ = ("_map",)

    def __init__(self):
        self._map = {}

    def relabel(self, signature):
        m = self._map
        return m.setdefault(signature, len(m))

    @property
    def next_id(self):
        return len(self._map)

    def __len__(self):
        return len(self._map)


@dataclass(frozen=True)
class Coloring:
    """Per-vertex color ids (dense 0..class_count-1) after `iteration` rounds."""

    colors: np.ndarray
    iteration: int
    class_count: int

    def __post_init__(self):
        if self.colors.size and int(self.colors.min()) < 0:
            raise ContractViolation("color ids must be non-negative")


@dataclass(frozen=True)
class TupleColoring:
    """Color ids for all n^k ordered k-tuples, indexed by sum(v_j * n^(k-1-j))."""

    k: int
    n: int
    colors: np.ndarray
    iteration: int
    class_count: int

    def __post_init__(self):
        if self.colors.shape != (self.n ** self.k,):
            raise ContractViolation("tuple coloring must hold exactly n^k entries")


def histogram(coloring):
    """Color id -> multiplicity."""
    values, counts = np.unique(coloring.colors, return_counts=True)
    return dict(zip(values.tolist(), counts.tolist()))


def partition_refines(fine, coarse):
    """True when every class of `fine` is contained in one class of `coarse`.

    Both arguments are color arrays over the same vertex or tuple set; the
    ids themselves need not match, only the induced partitions matter.
    """
    fine = np.asarray(fine)
    coarse = np.asarray(coarse)
    if fine.shape != coarse.shape:
        raise ContractViolation("partitions must cover the same element set")
    mapping = {}
    for f, c in zip(fine.tolist(), coarse.tolist()):
        if mapping.setdefault(f, c) != c:
            return False
    return True


def _relabel(signatures, dictionary):
    relabel = dictionary.relabel
    return np.fromiter((relabel(s) for s in signatures), dtype=np.int64, count=len(signatures))


def _class_count(colors):
    return int(np.unique(colors).size)


def _finish(colors, iteration):
    return Coloring(colors=colors, iteration=iteration, class_count=_class_count(colors))


def _check_vertex_inputs(graph, coloring):
    if coloring.colors.shape != (graph.n,):
        raise ContractViolation(
            f"coloring covers {coloring.colors.shape[0]} vertices, graph has {graph.n}")


# ---------------------------------------------------------------------------
# vertex variants

def _label_signatures(labels):
    return [array("q", [lab]).tobytes() for lab in labels.tolist()]


def initial_coloring(graph, dictionary=None):
    """Iteration-0 coloring: the vertex labels, relabeled to dense ids."""
    dictionary = dictionary if dictionary is not None else ColorDictionary()
    colors = _relabel(_label_signatures(graph.labels), dictionary)
    return _finish(colors, 0)


def _vertex_signatures(graph, colors, variant):
    colors = np.ascontiguousarray(colors, dtype=np.int64)
    if variant == "1wl":
        return kernels.signatures_plain(graph.indptr, graph.nbr, colors)
    if variant == "1rwl":
        return kernels.signatures_tagged(graph.indptr, graph.nbr, graph.rel, colors, graph.r)
    if variant == "weak":
        return kernels.signatures_weak(graph.indptr, graph.nbr, graph.rel, colors, graph.r)
    raise ContractViolation(f"unknown vertex variant {variant!r}")


def step_1wl(graph, coloring, dictionary):
    """One plain color-refinement round on a labeled graph."""
    _check_vertex_inputs(graph, coloring)
    sigs = _vertex_signatures(graph, coloring.colors, "1wl")
    return _finish(_relabel(sigs, dictionary), coloring.iteration + 1)


def step_1rwl(graph, coloring, dictionary):
    """One relational round: neighbor colors tagged with their relation id."""
    _check_vertex_inputs(graph, coloring)
    sigs = _vertex_signatures(graph, coloring.colors, "1rwl")
    return _finish(_relabel(sigs, dictionary), coloring.iteration + 1)


def step_weak_1rwl(graph, coloring, dictionary):
    """One weak round: untagged neighbor colors plus per-relation degrees."""
    _check_vertex_inputs(graph, coloring)
    sigs = _vertex_signatures(graph, coloring.colors, "weak")
    return _finish(_relabel(sigs, dictionary), coloring.iteration + 1)


# ---------------------------------------------------------------------------
# tuple variants

def _check_tuple_feasible(n, k, cap):
    if k < 1:
        raise ContractViolation("tuple order k must be >= 1")
    if n ** k > cap:
        raise CapExceeded(f"n^k = {n ** k} exceeds the tuple storage cap {cap}")


def _relation_pair_sets(graph):
    if isinstance(graph, MultiRelGraph):
        return [set(map(tuple, graph.relation_edges(i))) for i in range(graph.r)]
    return [set(map(tuple, graph.edges()))]


def _atp_signatures(graph, k):
    """Canonical atomic-type signature per ordered k-tuple.

    Two tuples share a signature exactly when the component mapping preserves
    equalities, vertex labels, and membership in every relation.
    """
    n = graph.n
    pair_sets = _relation_pair_sets(graph)
    r = len(pair_sets)
    if r > 62:
        raise ContractViolation("tuple signatures support at most 62 relations")
    labels = graph.labels.tolist()
    sigs = []
    digits = [0] * k
    total = n ** k
    for _ in range(total):
        eq = []
        for j in range(k):
            vj = digits[j]
            first = j
            for i in range(j):
                if digits[i] == vj:
                    first = i
                    break
            eq.append(first)
        parts = eq + [labels[digits[j]] for j in range(k)]
        for p in range(k):
            for q in range(p + 1, k):
                a, b = digits[p], digits[q]
                if a == b:
                    parts.append(0)
                    continue
                if a > b:
                    a, b = b, a
                mask = 0
                for i in range(r):
                    if (a, b) in pair_sets[i]:
                        mask |= 1 << i
                parts.append(mask)
        sigs.append(array("q", parts).tobytes())
        for j in range(k - 1, -1, -1):
            digits[j] += 1
            if digits[j] < n:
                break
            digits[j] = 0
    return sigs


def _tuple_round_signatures(graph, k, colors, mode):
    """Per-tuple update signature for one local or global k-tuple round."""
    n = graph.n
    total = n ** k
    colors = colors.tolist()
    strides = [n ** (k - 1 - j) for j in range(k)]
    if mode == "local-rel":
        r = graph.r
        adj = []
        for v in range(n):
            lo, hi = int(graph.indptr[v]), int(graph.indptr[v + 1])
            adj.append(list(zip(graph.nbr[lo:hi].tolist(), graph.rel[lo:hi].tolist())))
    elif mode == "local":
        adj = [graph.neighbors(v).tolist() for v in range(n)]
    elif mode == "global":
        everyone = list(range(n))
    else:
        raise ContractViolation(f"unknown tuple mode {mode!r}")
    sigs = []
    digits = [0] * k
    for idx in range(total):
        parts = [colors[idx]]
        for j in range(k):
            vj = digits[j]
            stride = strides[j]
            base = idx - vj * stride
            if mode == "local-rel":
                entries = [colors[base + w * stride] * r + i for (w, i) in adj[vj]]
            elif mode == "local":
                entries = [colors[base + w * stride] for w in adj[vj]]
            else:
                entries = [colors[base + w * stride] for w in everyone]
            entries.sort()
            parts.append(len(entries))
            parts.extend(entries)
        sigs.append(array("q", parts).tobytes())
        for j in range(k - 1, -1, -1):
            digits[j] += 1
            if digits[j] < n:
                break
            digits[j] = 0
    return sigs


def _finish_tuple(graph, k, colors, iteration):
    return TupleColoring(k=k, n=graph.n, colors=colors, iteration=iteration,
                         class_count=_class_count(colors))


def init_krlwl(graph, k, dictionary=None, cap=TUPLE_ENTRY_CAP):
    """Iteration-0 tuple coloring: the multi-relational atomic type."""
    if not isinstance(graph, MultiRelGraph):
        raise ContractViolation("init_krlwl expects a multi-relational graph")
    _check_tuple_feasible(graph.n, k, cap)
    dictionary = dictionary if dictionary is not None else ColorDictionary()
    colors = _relabel(_atp_signatures(graph, k), dictionary)
    return _finish_tuple(graph, k, colors, 0)


def init_ktuple(graph, k, dictionary=None, cap=TUPLE_ENTRY_CAP):
    """Iteration-0 tuple coloring on a plain labeled graph (atomic type)."""
    if not isinstance(graph, LabeledGraph):
        raise ContractViolation("init_ktuple expects a plain labeled graph")
    _check_tuple_feasible(graph.n, k, cap)
    dictionary = dictionary if dictionary is not None else ColorDictionary()
    colors = _relabel(_atp_signatures(graph, k), dictionary)
    return _finish_tuple(graph, k, colors, 0)


def _check_tuple_inputs(graph, tc):
    if tc.n != graph.n or tc.colors.shape != (graph.n ** tc.k,):
        raise ContractViolation("tuple coloring does not match the graph")


def step_krlwl(graph, tc, dictionary):
    """One local relational k-tuple round (position-wise, relation-tagged)."""
    if not isinstance(graph, MultiRelGraph):
        raise ContractViolation("step_krlwl expects a multi-relational graph")
    _check_tuple_inputs(graph, tc)
    sigs = _tuple_round_signatures(graph, tc.k, tc.colors, "local-rel")
    return _finish_tuple(graph, tc.k, _relabel(sigs, dictionary), tc.iteration + 1)


def step_delta_klwl(graph, tc, dictionary):
    """One local k-tuple round on a plain labeled graph."""
    if not isinstance(graph, LabeledGraph):
        raise ContractViolation("step_delta_klwl expects a plain labeled graph")
    _check_tuple_inputs(graph, tc)
    sigs = _tuple_round_signatures(graph, tc.k, tc.colors, "local")
    return _finish_tuple(graph, tc.k, _relabel(sigs, dictionary), tc.iteration + 1)


def step_oblivious_kwl(graph, tc, dictionary):
    """One global k-tuple round: substitutions range over every vertex."""
    if not isinstance(graph, LabeledGraph):
        raise ContractViolation("step_oblivious_kwl expects a plain labeled graph")
    _check_tuple_inputs(graph, tc)
    sigs = _tuple_round_signatures(graph, tc.k, tc.colors, "global")
    return _finish_tuple(graph, tc.k, _relabel(sigs, dictionary), tc.iteration + 1)


# ---------------------------------------------------------------------------
# drivers

def _dispatch(graph, variant, k, cap):
    """Return (initial coloring fn, one-round signature fn, domain size)."""
    if variant in ("1wl",):
        if not isinstance(graph, LabeledGraph):
            raise ContractViolation("1wl runs on a plain labeled graph (see union_graph)")
        return (lambda g: _label_signatures(g.labels),
                lambda g, c: _vertex_signatures(g, c, "1wl"), graph.n)
    if variant in ("1rwl", "weak"):
        if not isinstance(graph, MultiRelGraph):
            raise ContractViolation(f"{variant} runs on a multi-relational graph")
        return (lambda g: _label_signatures(g.labels),
                lambda g, c: _vertex_signatures(g, c, variant), graph.n)
    if variant == "krlwl":
        if not isinstance(graph, MultiRelGraph):
            raise ContractViolation("krlwl runs on a multi-relational graph")
        _check_tuple_feasible(graph.n, k, cap)
        return (lambda g: _atp_signatures(g, k),
                lambda g, c: _tuple_round_signatures(g, k, c, "local-rel"), graph.n ** k)
    if variant in ("delta-klwl", "oblivious-kwl"):
        if not isinstance(graph, LabeledGraph):
            raise ContractViolation(f"{variant} runs on a plain labeled graph")
        _check_tuple_feasible(graph.n, k, cap)
        mode = "local" if variant == "delta-klwl" else "global"
        return (lambda g: _atp_signatures(g, k),
                lambda g, c: _tuple_round_signatures(g, k, c, mode), graph.n ** k)
    raise ContractViolation(f"unknown variant {variant!r}")


def _is_tuple_variant(variant):
    return variant in TUPLE_VARIANTS


def stable_coloring(graph, variant, k=1, max_iter=None, cap=TUPLE_ENTRY_CAP):
    """Iterate `variant` until the class count stops changing.

    Returns (coloring, iterations): the coloring computed at the detection
    round and the number of rounds performed.  Detection never needs more
    than n rounds (n^k for tuple variants), and `max_iter` can force an
    earlier cut-off.
    """
    init_fn, round_fn, domain = _dispatch(graph, variant, k, cap)
    colors = _relabel(init_fn(graph), ColorDictionary())
    iteration = 0
    count = _class_count(colors)
    bound = domain if max_iter is None else max_iter
    while iteration < bound:
        iteration += 1
        colors = _relabel(round_fn(graph, colors), ColorDictionary())
        new_count = _class_count(colors)
        stable = new_count == count
        count = new_count
        if stable:
            break
    if _is_tuple_variant(variant):
        return _finish_tuple(graph, k, colors, iteration), iteration
    return _finish(colors, iteration), iteration


@dataclass
class DistinguishResult:
    """Outcome of a parallel two-graph refinement run."""

    distinguished_at: int | None
    iterations: int
    histogram_trace: list = field(default_factory=list)

    @property
    def distinguished(self):
        return self.distinguished_at is not None


def _counts(colors):
    values, counts = np.unique(colors, return_counts=True)
    return dict(zip(values.tolist(), counts.tolist()))


def distinguish(g, h, variant, k=1, cap=TUPLE_ENTRY_CAP, max_iter=None):
    """Run `variant` on both graphs with one shared relabeling per round.

    Reports the first iteration (including 0) whose color histograms differ,
    or None once the joint partition is stable.  Relational variants require
    matching relation counts.
    """
    if variant in ("1rwl", "weak", "krlwl"):
        if g.r != h.r:
            raise ContractViolation(f"relation counts differ: {g.r} vs {h.r}")
    init_g, round_g, dom_g = _dispatch(g, variant, k, cap)
    init_h, round_h, dom_h = _dispatch(h, variant, k, cap)
    shared = ColorDictionary()
    colors_g = _relabel(init_g(g), shared)
    colors_h = _relabel(init_h(h), shared)
    trace = [(_counts(colors_g), _counts(colors_h))]
    if trace[0][0] != trace[0][1]:
        return DistinguishResult(0, 0, trace)
    joint = len(shared)
    bound = dom_g + dom_h if max_iter is None else max_iter
    iteration = 0
    while iteration < bound:
        iteration += 1
        sigs_g = round_g(g, colors_g)
        sigs_h = round_h(h, colors_h)
        shared = ColorDictionary()
        colors_g = _relabel(sigs_g, shared)
        colors_h = _relabel(sigs_h, shared)
        pair = (_counts(colors_g), _counts(colors_h))
        trace.append(pair)
        if pair[0] != pair[1]:
            return DistinguishResult(iteration, iteration, trace)
        if len(shared) == joint:
            return DistinguishResult(None, iteration, trace)
        joint = len(shared)
    return DistinguishResult(None, iteration, trace)
