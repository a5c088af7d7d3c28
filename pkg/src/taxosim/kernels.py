"""Backend selection for the graph kernels.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` module is loaded. Set ``TAXOSIM_PURE_PYTHON=1`` to
force the fallback.
"""
import os

import numpy as np

from taxosim import _pykernels

_ckernels = None
if os.environ.get("TAXOSIM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from taxosim import _ckernels
    except ImportError:  # extension not built
        _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"
_impl = _ckernels if _ckernels is not None else _pykernels


def available_backends():
    return ["cython", "python"] if _ckernels is not None else ["python"]


def get_backend(name=None):
    """Return the kernel module called ``name`` (default: the active one)."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("taxosim._ckernels is not built")
        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def index_array(values):
    return np.ascontiguousarray(values, dtype=np.int32)


def bfs_distance(indptr, indices, src, dst):
    return _impl.bfs_distance(indptr, indices, src, dst)


def upward_distances(indptr, indices, src):
    return _impl.upward_distances(indptr, indices, src)


def propagate(indptr, indices, own):
    return _impl.propagate(indptr, indices, np.ascontiguousarray(own, dtype=np.float64))


def min_depths(indptr, indices, order):
    return _impl.min_depths(indptr, indices, index_array(order))


def dijkstra_distance(indptr, indices, weights, src, dst):
    return _impl.dijkstra_distance(
        indptr, indices, np.ascontiguousarray(weights, dtype=np.float64), src, dst
    )
