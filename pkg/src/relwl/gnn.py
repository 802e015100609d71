"""Dense forward passes for the relational architectures, the integer-exact
refinement-as-linear-layer view, parameter conversions between the two layer
families, and the refinement/feature consistency checker.

Determinism contract
--------------------
Neighbor aggregation is summed grouped by (neighbor feature bytes, relation
id) in ascending order, each group contributing count * value with an exact
integer count.  Any two vertices whose refinement colors agree see identical
group sequences, so their features come out bit-identical, not merely close;
the same grouping makes every forward pass exactly permutation-equivariant.
Compositions that are affine in the relation feature (add, concat) are
evaluated in decomposed form h·X + (sum_i |N_i(v)| z_i)·Y, which extends the
bit-equality guarantee to the weak coloring.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ContractViolation
from .graphs import LabeledGraph, MultiRelGraph
from .rng import XorShift64Star
from .wl import (
    ColorDictionary,
    init_krlwl,
    initial_coloring,
    step_1rwl,
    step_weak_1rwl,
)

TAGGED_COMPOSITIONS = ("mult", "scale", "ccorr", "rotate", "concat-mlp")
DECOMPOSED_COMPOSITIONS = ("add", "concat")
COMPOSITIONS = TAGGED_COMPOSITIONS + DECOMPOSED_COMPOSITIONS

ACTIVATIONS = ("relu", "sign", "identity")


def apply_activation(x, name):
    if name == "relu":
        return np.maximum(x, 0.0)
    if name == "sign":
        return np.sign(x)
    if name == "identity":
        return x
    raise ContractViolation(f"unknown activation {name!r}")


# ---------------------------------------------------------------------------
# deterministic row machinery

def _row_classes(x):
    """Dense class id per row, ordered by ascending row bytes.

    Byte-level identity is the grouping key: bit-equal rows share a class,
    and the ordering is permutation-invariant.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    first_index = {}
    keys = []
    for i in range(x.shape[0]):
        key = x[i].tobytes()
        keys.append(key)
        first_index.setdefault(key, i)
    ordered = sorted(first_index)
    rank = {key: c for c, key in enumerate(ordered)}
    classes = np.fromiter((rank[k] for k in keys), dtype=np.int64, count=len(keys))
    uniques = x[[first_index[k] for k in ordered]] if ordered else x[:0]
    return classes, uniques


def transform_rows(x, fn):
    """Apply a row transform once per distinct row and scatter the results."""
    classes, uniques = _row_classes(x)
    out = fn(uniques)
    return np.ascontiguousarray(out[classes])


def readout(features):
    """Order-invariant sum over rows: ascending row-byte groups, count * value."""
    features = np.asarray(features, dtype=np.float64)
    classes, uniques = _row_classes(features)
    counts = np.bincount(classes, minlength=uniques.shape[0]).astype(np.float64)
    total = np.zeros(features.shape[1], dtype=np.float64)
    for c in range(uniques.shape[0]):
        total += counts[c] * uniques[c]
    return total


# ---------------------------------------------------------------------------
# feature initialization

def init_features(graph, mode, dim):
    """Initial vertex features consistent with the labeling.

    constant-basis: every row is the first standard basis vector; refused
    when labels are non-uniform, because equal features must mean equal
    labels.  onehot-label: row v is the basis vector indexed by the rank of
    v's label among the distinct labels.
    """
    labels = graph.labels
    if dim < 1:
        raise ContractViolation("feature width must be positive")
    if mode == "constant-basis":
        if np.unique(labels).size > 1:
            raise ContractViolation(
                "constant-basis features require uniform labels; use onehot-label")
        out = np.zeros((graph.n, dim), dtype=np.float64)
        out[:, 0] = 1.0
        return out
    if mode == "onehot-label":
        distinct = np.unique(labels)
        if dim < distinct.size:
            raise ContractViolation(
                f"feature width {dim} below distinct label count {distinct.size}")
        index = {int(lab): i for i, lab in enumerate(distinct.tolist())}
        out = np.zeros((graph.n, dim), dtype=np.float64)
        for v in range(graph.n):
            out[v, index[int(labels[v])]] = 1.0
        return out
    raise ContractViolation(f"unknown feature mode {mode!r}")


def features_from_coloring(coloring, dim=None):
    """One-hot rows for a (tuple) coloring; width defaults to the class count."""
    colors = coloring.colors
    q = coloring.class_count
    if dim is None:
        dim = q
    if dim < q:
        raise ContractViolation(f"feature width {dim} below class count {q}")
    out = np.zeros((colors.shape[0], dim), dtype=np.float64)
    out[np.arange(colors.shape[0]), colors] = 1.0
    return out


# ---------------------------------------------------------------------------
# parameters

@dataclass
class RgcnParams:
    """Per-relation weight layer: h W0 + sum_i sum_{w in N_i(v)} h_w W_i."""

    w0: np.ndarray
    w_rel: list
    aggregate: str = "sum"
    mlp: tuple | None = None  # (hidden, out), applied to each relation's inner sum

    def __post_init__(self):
        d, e = self.w0.shape
        for w in self.w_rel:
            if w.shape != (d, e):
                raise ContractViolation("relation matrices must all share the w0 shape")
        if self.aggregate not in ("sum", "mean"):
            raise ContractViolation("aggregate must be sum or mean")


@dataclass
class CompParams:
    """Composition layer: h W0 + sum_i sum_{w in N_i(v)} phi(h_w, z_i) W1."""

    w0: np.ndarray
    w1: np.ndarray
    z: list | None
    composition: str
    scale_alphas: np.ndarray | None = None
    mlp: tuple | None = None  # concat-mlp hidden/out transforms
    directional: bool = False
    w1_in: np.ndarray | None = None
    w1_out: np.ndarray | None = None
    normalize: bool = False
    relation_update: np.ndarray | None = None

    def __post_init__(self):
        if self.composition not in COMPOSITIONS:
            raise ContractViolation(f"unknown composition {self.composition!r}")
        if self.composition == "scale" and self.scale_alphas is None:
            raise ContractViolation("scale composition needs scale_alphas")
        if self.composition == "concat-mlp" and self.mlp is None:
            raise ContractViolation("concat-mlp composition needs the mlp transforms")
        if self.directional and (self.w1_in is None or self.w1_out is None):
            raise ContractViolation("directional mode needs w1_in and w1_out")


@dataclass
class KrnParams:
    """k-tuple layer: h W0 + sum_j sum_i sum_{w in N_i(v_j)} phi(h_theta_j, z_i) Wj."""

    k: int
    w0: np.ndarray
    w_pos: list
    z: list | None
    composition: str
    scale_alphas: np.ndarray | None = None
    mlp: tuple | None = None

    def __post_init__(self):
        if len(self.w_pos) != self.k:
            raise ContractViolation("one position matrix per tuple slot required")


# ---------------------------------------------------------------------------
# composition maps

def _ccorr(h, z):
    d = h.shape[-1]
    idx = (np.arange(d)[:, None] + np.arange(d)[None, :]) % d
    # (h ⋆ z)_i = sum_j h_j z_{(i+j) mod d}, zero-indexed
    return h @ z[idx.T]


def compose(name, h, z=None, alpha=None, mlp=None):
    """Merge one vertex feature with one relation feature."""
    h = np.asarray(h, dtype=np.float64)
    if name == "add":
        return h + z
    if name == "mult":
        return h * z
    if name == "scale":
        return alpha * h
    if name == "ccorr":
        if h.shape[-1] != np.asarray(z).shape[-1]:
            raise ContractViolation("circular correlation needs matching widths")
        return _ccorr(np.atleast_2d(h), np.asarray(z, dtype=np.float64))[0] if h.ndim == 1 \
            else _ccorr(h, np.asarray(z, dtype=np.float64))
    if name == "rotate":
        if h.shape[-1] % 2:
            raise ContractViolation("rotate needs an even feature width")
        if np.asarray(z).shape[-1] * 2 != h.shape[-1]:
            raise ContractViolation("rotate needs one angle per coordinate pair")
        cos, sin = np.cos(z), np.sin(z)
        even, odd = h[..., 0::2], h[..., 1::2]
        out = np.empty_like(h)
        out[..., 0::2] = even * cos - odd * sin
        out[..., 1::2] = even * sin + odd * cos
        return out
    if name == "concat":
        tiled = np.broadcast_to(z, h.shape[:-1] + (np.asarray(z).shape[-1],))
        return np.concatenate([h, tiled], axis=-1)
    if name == "concat-mlp":
        hidden, out_w = mlp
        joint = compose("concat", h, z)
        return np.maximum(joint @ hidden, 0.0) @ out_w
    raise ContractViolation(f"unknown composition {name!r}")


def _compose_rows(name, uniques, z_i, alpha_i, mlp):
    """phi applied to every distinct feature row for one relation."""
    if name == "scale":
        return alpha_i * uniques
    return compose(name, uniques, z=z_i, mlp=mlp)


# ---------------------------------------------------------------------------
# grouped aggregation

def _tagged_counts(graph, classes, q):
    """counts[v, c, i] = number of relation-i neighbors of v in feature class c."""
    n, r = graph.n, graph.r
    counts = np.zeros((n, q, r), dtype=np.int64)
    us = np.repeat(np.arange(n, dtype=np.int64), np.diff(graph.indptr))
    np.add.at(counts, (us, classes[graph.nbr], graph.rel), 1)
    return counts


def _degree_matrix(graph):
    n, r = graph.n, graph.r
    deg = np.zeros((n, r), dtype=np.int64)
    us = np.repeat(np.arange(n, dtype=np.int64), np.diff(graph.indptr))
    np.add.at(deg, (us, graph.rel), 1)
    return deg


def _accumulate_groups(counts, mats, width):
    """Ascending (feature class, relation) accumulation of count * value."""
    rows, q, r = counts.shape
    out = np.zeros((rows, width), dtype=np.float64)
    for c in range(q):
        for i in range(r):
            out += counts[:, c, i:i + 1] * mats[i][c]
    return out


def _relation_message_rows(params, uniques):
    """Per relation: phi(distinct rows, z_i) W1, each value computed once."""
    r = len(params.z) if params.z is not None else len(params.scale_alphas)
    mats = []
    for i in range(r):
        z_i = None if params.z is None else params.z[i]
        alpha_i = None if params.scale_alphas is None else float(params.scale_alphas[i])
        phi = _compose_rows(params.composition, uniques, z_i, alpha_i, params.mlp)
        mats.append(np.ascontiguousarray(phi @ params.w1))
    return mats


def rgcn_forward(graph, params, h, activation="relu"):
    """One per-relation-weights layer; mean divides each inner sum by |N_i(v)|."""
    h = np.asarray(h, dtype=np.float64)
    if h.shape != (graph.n, params.w0.shape[0]):
        raise ContractViolation("feature matrix does not match graph and parameters")
    classes, uniques = _row_classes(h)
    counts = _tagged_counts(graph, classes, uniques.shape[0])
    e = params.w0.shape[1]
    self_term = transform_rows(h, lambda u: u @ params.w0)
    if params.aggregate == "sum" and params.mlp is None:
        mats = [np.ascontiguousarray(uniques @ w) for w in params.w_rel]
        total = _accumulate_groups(counts, mats, e)
    else:
        deg = _degree_matrix(graph)
        total = np.zeros((graph.n, e), dtype=np.float64)
        for i in range(graph.r):
            mat = np.ascontiguousarray(uniques @ params.w_rel[i])
            part = np.zeros((graph.n, e), dtype=np.float64)
            for c in range(uniques.shape[0]):
                part += counts[:, c, i:i + 1] * mat[c]
            if params.aggregate == "mean":
                nonzero = deg[:, i] > 0
                part[nonzero] /= deg[nonzero, i:i + 1]
            if params.mlp is not None:
                hidden, out_w = params.mlp
                part = transform_rows(part, lambda u: np.maximum(u @ hidden, 0.0) @ out_w)
            total += part
    return apply_activation(self_term + total, activation)


def _directional_views(graph):
    """Orient each stored edge from its smaller to its larger endpoint."""
    arcs = []
    for i in range(graph.r):
        for u, v in graph.relation_edges(i):
            arcs.append((u, v, i))
    return arcs


def _compgcn_directional(graph, params, h, activation, classes, uniques):
    arcs = _directional_views(graph)
    n = graph.n
    deg = {}  # (vertex, relation, direction) -> count
    for u, v, i in arcs:
        deg[(v, i, "in")] = deg.get((v, i, "in"), 0) + 1
        deg[(u, i, "out")] = deg.get((u, i, "out"), 0) + 1
    weights = {"in": params.w1_in, "out": params.w1_out}
    message = {}
    groups = [dict() for _ in range(n)]  # key -> count
    for u, v, i in arcs:
        for receiver, sender, direction in ((v, u, "in"), (u, v, "out")):
            sdeg = deg.get((sender, i, direction), 0)
            key = (int(classes[sender]), i, direction, sdeg)
            groups[receiver][key] = groups[receiver].get(key, 0) + 1
    e = params.w0.shape[1]
    total = np.zeros((n, e), dtype=np.float64)
    for v in range(n):
        for key in sorted(groups[v], key=lambda t: (t[0], t[1], t[2], t[3])):
            c, i, direction, sdeg = key
            count = groups[v][key]
            if key[:3] not in message:
                z_i = None if params.z is None else params.z[i]
                alpha_i = None if params.scale_alphas is None else float(params.scale_alphas[i])
                phi = _compose_rows(params.composition, uniques[c:c + 1], z_i, alpha_i, params.mlp)
                message[key[:3]] = (phi @ weights[direction])[0]
            value = message[key[:3]]
            if params.normalize:
                rdeg = deg.get((v, i, direction), 0)
                norm = np.sqrt(rdeg * sdeg)
                factor = count / norm if norm > 0 else float(count)
            else:
                factor = float(count)
            total[v] += factor * value
    self_term = transform_rows(h, lambda u: u @ params.w0)
    return apply_activation(self_term + total, activation)


def compgcn_forward(graph, params, h, activation="relu"):
    """One composition layer (basic mode exactly; directional per the ablation)."""
    h = np.asarray(h, dtype=np.float64)
    if h.shape[0] != graph.n:
        raise ContractViolation("feature matrix does not match the graph")
    if h.shape[1] != params.w0.shape[0]:
        raise ContractViolation("feature width does not match w0")
    _validate_comp_widths(params, h.shape[1], graph.r)
    classes, uniques = _row_classes(h)
    if params.directional:
        return _compgcn_directional(graph, params, h, activation, classes, uniques)
    e = params.w0.shape[1]
    self_term = transform_rows(h, lambda u: u @ params.w0)
    if params.composition in DECOMPOSED_COMPOSITIONS:
        counts = _tagged_counts(graph, classes, uniques.shape[0])
        untagged = counts.sum(axis=2)
        neighbor_sum = np.zeros((graph.n, h.shape[1]), dtype=np.float64)
        for c in range(uniques.shape[0]):
            neighbor_sum += untagged[:, c:c + 1] * uniques[c]
        deg = _degree_matrix(graph)
        zwidth = params.z[0].shape[0]
        relation_sum = np.zeros((graph.n, zwidth), dtype=np.float64)
        for i in range(graph.r):
            relation_sum += deg[:, i:i + 1] * params.z[i]
        if params.composition == "add":
            total = transform_rows(neighbor_sum + relation_sum, lambda u: u @ params.w1)
        else:  # concat: (h ‖ z) W1 = h X + z Y
            d = h.shape[1]
            x_part, y_part = params.w1[:d], params.w1[d:]
            total = transform_rows(neighbor_sum, lambda u: u @ x_part) \
                + transform_rows(relation_sum, lambda u: u @ y_part)
    else:
        counts = _tagged_counts(graph, classes, uniques.shape[0])
        mats = _relation_message_rows(params, uniques)
        total = _accumulate_groups(counts, mats, e)
    return apply_activation(self_term + total, activation)


def _validate_comp_widths(params, d, r):
    c_width = params.w1.shape[0]
    comp = params.composition
    if comp == "scale":
        if params.scale_alphas is None or len(params.scale_alphas) != r:
            raise ContractViolation("scale needs one alpha per relation")
        if c_width != d:
            raise ContractViolation("scale output width equals the input width")
        return
    if params.z is None or len(params.z) != r:
        raise ContractViolation("one relation feature per relation required")
    b = params.z[0].shape[0]
    if comp in ("mult", "add"):
        if not (b == d == c_width):
            raise ContractViolation(f"{comp} needs b = c = d")
    elif comp == "ccorr":
        if not (b == d == c_width):
            raise ContractViolation("ccorr needs b = c = d")
    elif comp == "rotate":
        if d % 2 or b * 2 != d or c_width != d:
            raise ContractViolation("rotate needs even c with b = c/2 angles")
    elif comp == "concat":
        if c_width != d + b:
            raise ContractViolation("concat needs w1 with d + b rows")
    elif comp == "concat-mlp":
        hidden, out_w = params.mlp
        if hidden.shape[0] != d + b or out_w.shape[1] != c_width:
            raise ContractViolation("concat-mlp transform widths are inconsistent")


# ---------------------------------------------------------------------------
# k-tuple forward

def _tuple_counts(graph, k, classes, q):
    """Per position j: counts[tau, c, i] over local substitutions at slot j."""
    n, r = graph.n, graph.r
    total = n ** k
    indices = np.arange(total, dtype=np.int64)
    adj = []
    for v in range(n):
        lo, hi = int(graph.indptr[v]), int(graph.indptr[v + 1])
        adj.append(list(zip(graph.nbr[lo:hi].tolist(), graph.rel[lo:hi].tolist())))
    out = []
    for j in range(k):
        stride = n ** (k - 1 - j)
        digit = (indices // stride) % n
        counts = np.zeros((total, q, r), dtype=np.int64)
        for v in range(n):
            sel = indices[digit == v]
            for w, i in adj[v]:
                tgt = sel + (w - v) * stride
                np.add.at(counts, (sel, classes[tgt], i), 1)
        out.append(counts)
    return out


def krn_forward(graph, params, h, activation="relu"):
    """One local k-tuple layer over n^k feature rows."""
    h = np.asarray(h, dtype=np.float64)
    total = graph.n ** params.k
    if h.shape != (total, params.w0.shape[0]):
        raise ContractViolation(f"tuple features must be {total} x {params.w0.shape[0]}")
    classes, uniques = _row_classes(h)
    counts = _tuple_counts(graph, params.k, classes, uniques.shape[0])
    e = params.w0.shape[1]
    self_term = transform_rows(h, lambda u: u @ params.w0)
    total_msg = np.zeros((total, e), dtype=np.float64)
    for j in range(params.k):
        layer = CompParams(w0=params.w0, w1=params.w_pos[j], z=params.z,
                           composition=params.composition,
                           scale_alphas=params.scale_alphas, mlp=params.mlp)
        mats = _relation_message_rows(layer, uniques)
        total_msg += _accumulate_groups(counts[j], mats, e)
    return apply_activation(self_term + total_msg, activation)


# ---------------------------------------------------------------------------
# refinement as exact integer linear counts

def wl_step_as_linear_counts(graph, coloring):
    """Block count matrix [one-hot colors | per-relation class counts].

    Row equality of the result induces exactly the partition one relational
    refinement round would produce; everything is 64-bit integer arithmetic.
    """
    if coloring.colors.shape != (graph.n,):
        raise ContractViolation("coloring does not match the graph")
    q = coloring.class_count
    n, r = graph.n, graph.r
    out = np.zeros((n, q * (r + 1)), dtype=np.int64)
    out[np.arange(n), coloring.colors] = 1
    us = np.repeat(np.arange(n, dtype=np.int64), np.diff(graph.indptr))
    np.add.at(out, (us, (graph.rel + 1) * q + coloring.colors[graph.nbr]), 1)
    return out


# ---------------------------------------------------------------------------
# parameter conversions

def convert_mult_to_rgcn(params):
    """Fold the relation features of a mult-composition layer into per-relation
    weights: W_i = diag(z_i) W_1."""
    if params.composition != "mult":
        raise ContractViolation("conversion defined for the mult composition")
    if params.directional:
        raise ContractViolation("conversion defined for the basic mode only")
    w_rel = [np.ascontiguousarray(z[:, None] * params.w1) for z in params.z]
    return RgcnParams(w0=params.w0.copy(), w_rel=w_rel, aggregate="sum")


def simulate_rgcn_with_compgcn(params):
    """Two composition layers reproducing one per-relation-weights layer.

    Layer one replicates features r times (identity blocks, zero neighbor
    term, identity activation); layer two multiplies with per-relation block
    indicators and stacks the relation matrices.  Returns
    [(CompParams, activation)] with the caller's activation on layer two.
    """
    if params.aggregate != "sum":
        raise ContractViolation("simulation covers the sum-aggregation form")
    if params.mlp is not None:
        raise ContractViolation("simulation covers the plain per-relation form")
    d, e = params.w0.shape
    r = len(params.w_rel)
    replicate = np.concatenate([np.eye(d)] * r, axis=1)
    first = CompParams(
        w0=replicate,
        w1=np.zeros((d, d * r)),
        z=[np.zeros(d) for _ in range(r)],
        composition="mult",
    )
    w0_padded = np.concatenate([params.w0, np.zeros((d * (r - 1), e))], axis=0)
    w1_stacked = np.concatenate(list(params.w_rel), axis=0)
    z_blocks = []
    for i in range(r):
        z = np.zeros(d * r)
        z[i * d:(i + 1) * d] = 1.0
        z_blocks.append(z)
    second = CompParams(w0=w0_padded, w1=w1_stacked, z=z_blocks, composition="mult")
    return [(first, "identity"), (second, None)]


def run_simulated_rgcn(graph, params, h, activation="relu"):
    """Forward the two-layer simulation; equals rgcn_forward within 1e-10."""
    (first, _), (second, _) = simulate_rgcn_with_compgcn(params)
    mid = compgcn_forward(graph, first, h, activation="identity")
    return compgcn_forward(graph, second, mid, activation=activation)


def relative_max_error(a, b):
    denom = max(1.0, float(np.max(np.abs(b))) if b.size else 1.0)
    return float(np.max(np.abs(a - b))) / denom if a.size else 0.0


def evolve_relation_features(params, layers):
    """Per-layer parameter list with z advanced by the relation update map."""
    out = [params]
    for _ in range(layers - 1):
        prev = out[-1]
        if prev.relation_update is None or prev.z is None:
            out.append(prev)
        else:
            out.append(replace(prev, z=[z @ prev.relation_update for z in prev.z]))
    return out


# ---------------------------------------------------------------------------
# random parameters and the consistency checker

CONSISTENCY_PAIRS = (
    "1rwl:rgcn",
    "1rwl:compgcn-mult",
    "1rwl:compgcn-scale",
    "1rwl:compgcn-ccorr",
    "weak:compgcn-add",
    "weak:compgcn-concat",
)


def random_params(arch, rng, d, e, r, k=1):
    """Weights drawn from the documented xorshift stream, uniform in [-1, 1]."""
    if arch == "rgcn":
        return RgcnParams(w0=rng.matrix(d, e), w_rel=[rng.matrix(d, e) for _ in range(r)])
    if arch == "rgcn-mean":
        return RgcnParams(w0=rng.matrix(d, e), w_rel=[rng.matrix(d, e) for _ in range(r)],
                          aggregate="mean")
    if arch == "rgcn-mlp":
        return RgcnParams(w0=rng.matrix(d, e), w_rel=[rng.matrix(d, e) for _ in range(r)],
                          mlp=(rng.matrix(e, e), rng.matrix(e, e)))
    if arch == "krn":
        return KrnParams(k=k, w0=rng.matrix(d, e), w_pos=[rng.matrix(d, e) for _ in range(k)],
                         z=[rng.vector(d) for _ in range(r)], composition="mult")
    if not arch.startswith("compgcn-"):
        raise ContractViolation(f"unknown architecture {arch!r}")
    comp = arch[len("compgcn-"):]
    w0 = rng.matrix(d, e)
    if comp == "scale":
        return CompParams(w0=w0, w1=rng.matrix(d, e), z=None, composition="scale",
                          scale_alphas=rng.vector(r))
    if comp in ("mult", "add", "ccorr"):
        return CompParams(w0=w0, w1=rng.matrix(d, e), z=[rng.vector(d) for _ in range(r)],
                          composition=comp)
    if comp == "rotate":
        if d % 2:
            raise ContractViolation("rotate needs an even feature width")
        return CompParams(w0=w0, w1=rng.matrix(d, e), z=[rng.vector(d // 2) for _ in range(r)],
                          composition="rotate")
    if comp == "concat":
        b = d
        return CompParams(w0=w0, w1=rng.matrix(d + b, e), z=[rng.vector(b) for _ in range(r)],
                          composition="concat")
    if comp == "concat-mlp":
        b = d
        return CompParams(w0=w0, w1=rng.matrix(d, e), z=[rng.vector(b) for _ in range(r)],
                          composition="concat-mlp", mlp=(rng.matrix(d + b, e), rng.matrix(e, d)))
    raise ContractViolation(f"unknown architecture {arch!r}")


def _forward_for(arch, graph, params, h, activation):
    if arch.startswith("rgcn"):
        return rgcn_forward(graph, params, h, activation)
    return compgcn_forward(graph, params, h, activation)


def _pairs_within(counts):
    return sum(c * (c - 1) // 2 for c in counts)


@dataclass
class ConsistencyReport:
    variant: str
    arch: str
    layers: int
    width: int
    seeds: list
    violations: list = field(default_factory=list)
    witness_rates: dict = field(default_factory=dict)

    @property
    def violation_count(self):
        return len(self.violations)


def wl_gnn_consistency(graph, pair, layers, seeds, width=16, activation="relu"):
    """Check colors-equal => features-bit-equal over seeded random weights.

    `pair` is "<variant>:<arch>" with variant in {1rwl, weak}.  Violations
    are collected with the offending vertex pair and layer; witness rates
    report, per layer, the fraction of color-distinct vertex pairs whose
    features also differ.
    """
    if isinstance(pair, str):
        variant, arch = pair.split(":", 1)
    else:
        variant, arch = pair
    if variant not in ("1rwl", "weak"):
        raise ContractViolation("variant must be 1rwl or weak")
    step = step_1rwl if variant == "1rwl" else step_weak_1rwl
    trajectory = [initial_coloring(graph)]
    for _ in range(layers):
        trajectory.append(step(graph, trajectory[-1], ColorDictionary()))
    d = int(np.unique(graph.labels).size)
    h0 = init_features(graph, "onehot-label", d)
    seed_list = list(range(1, seeds + 1)) if isinstance(seeds, int) else list(seeds)
    report = ConsistencyReport(variant=variant, arch=arch, layers=layers,
                               width=width, seeds=seed_list)
    n = graph.n
    total_pairs = n * (n - 1) // 2
    for seed in seed_list:
        rng = XorShift64Star(seed)
        h = h0
        rates = []
        for layer in range(1, layers + 1):
            params = random_params(arch, rng, h.shape[1], width, graph.r)
            h = _forward_for(arch, graph, params, h, activation)
            colors = trajectory[layer].colors
            fclasses, _ = _row_classes(h)
            by_color = {}
            for v in range(n):
                by_color.setdefault(int(colors[v]), []).append(v)
            for members in by_color.values():
                head = fclasses[members[0]]
                for v in members[1:]:
                    if fclasses[v] != head:
                        report.violations.append(
                            {"seed": seed, "layer": layer,
                             "vertices": [members[0], v]})
                        break
            same_color = _pairs_within([len(m) for m in by_color.values()])
            same_feature = _pairs_within(np.bincount(fclasses).tolist())
            color_diff = total_pairs - same_color
            if color_diff == 0:
                rates.append(1.0)
            else:
                rates.append(1.0 - (same_feature - same_color) / color_diff)
        report.witness_rates[seed] = rates
    return report


def feature_partition(features):
    """Dense partition ids of bit-identical feature rows."""
    classes, _ = _row_classes(features)
    return classes
