"""Kernel selection: compiled extension when built, interpreted twin otherwise.

Set ``RELWL_PURE_KERNELS=1`` to force the interpreted implementation even
when the extension is available (used by the benchmark and the equivalence
tests).  Both implementations emit byte-identical signatures.
"""

import os

from . import pure

try:
    from .. import _ckern as compiled
except ImportError:
    compiled = None

_forced_pure = os.environ.get("RELWL_PURE_KERNELS", "") not in ("", "0")
active = pure if (compiled is None or _forced_pure) else compiled


def backend_name():
    return "pure" if active is pure else "compiled"


def signatures_plain(indptr, nbr, colors):
    return active.signatures_plain(indptr, nbr, colors)


def signatures_tagged(indptr, nbr, rel, colors, r):
    return active.signatures_tagged(indptr, nbr, rel, colors, r)


def signatures_weak(indptr, nbr, rel, colors, r):
    return active.signatures_weak(indptr, nbr, rel, colors, r)
