"""Interpreted twin of the compiled refinement-round kernel.

Each function returns one canonical byte signature per vertex: the packed
native int64 sequence described below.  The compiled kernel in
``relwl._ckern`` produces byte-identical output; the equivalence is pinned
by tests and by the benchmark harness.

Layouts (all entries int64, native byte order):
  plain     [own, sorted neighbor colors...]
  tagged    [own, sorted (color * r + relation)...]
  weak      [own, sorted neighbor colors..., deg_0, ..., deg_{r-1}]
"""

from array import array


def signatures_plain(indptr, nbr, colors):
    indptr = indptr.tolist()
    nbr = nbr.tolist()
    colors = colors.tolist()
    out = []
    for v in range(len(indptr) - 1):
        lo, hi = indptr[v], indptr[v + 1]
        entries = sorted(colors[u] for u in nbr[lo:hi])
        out.append(array("q", [colors[v]] + entries).tobytes())
    return out


def signatures_tagged(indptr, nbr, rel, colors, r):
    indptr = indptr.tolist()
    nbr = nbr.tolist()
    rel = rel.tolist()
    colors = colors.tolist()
    out = []
    for v in range(len(indptr) - 1):
        lo, hi = indptr[v], indptr[v + 1]
        entries = sorted(colors[nbr[j]] * r + rel[j] for j in range(lo, hi))
        out.append(array("q", [colors[v]] + entries).tobytes())
    return out


def signatures_weak(indptr, nbr, rel, colors, r):
    indptr = indptr.tolist()
    nbr = nbr.tolist()
    rel = rel.tolist()
    colors = colors.tolist()
    out = []
    for v in range(len(indptr) - 1):
        lo, hi = indptr[v], indptr[v + 1]
        entries = sorted(colors[u] for u in nbr[lo:hi])
        degs = [0] * r
        for j in range(lo, hi):
            degs[rel[j]] += 1
        out.append(array("q", [colors[v]] + entries + degs).tobytes())
    return out
