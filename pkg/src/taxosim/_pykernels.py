"""Pure-Python graph kernels.

Reference implementation of the routines in ``_ckernels.pyx``. Both modules
expose identical signatures; ``taxosim.kernels`` picks one at import time.

All graphs are passed in CSR form: ``indptr`` (length n+1) and ``indices``
(int32 neighbour ids). Node ids are dense integers ``0..n-1``.
"""
from collections import deque
import heapq
import math

import numpy as np


def bfs_distance(indptr, indices, src, dst):
    """Hop count of the shortest path from ``src`` to ``dst``, or -1."""
    if src == dst:
        return 0
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = int(indices[k])
            if v in dist:
                continue
            if v == dst:
                return du
            dist[v] = du
            queue.append(v)
    return -1


def upward_distances(indptr, indices, src):
    """Map every node reachable from ``src`` (including itself) to its hop count."""
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = int(indices[k])
            if v not in dist:
                dist[v] = du
                queue.append(v)
    return dist


def propagate(indptr, indices, own):
    """Add each node's ``own`` mass exactly once to itself and every ancestor."""
    n = len(indptr) - 1
    total = np.zeros(n, dtype=np.float64)
    stamp = [-1] * n
    for s in range(n):
        mass = own[s]
        if mass == 0.0:
            continue
        stamp[s] = s
        stack = [s]
        while stack:
            u = stack.pop()
            total[u] += mass
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if stamp[v] != s:
                    stamp[v] = s
                    stack.append(v)
    return total


def min_depths(indptr, indices, order):
    """Depth of each node, 1 at parentless nodes, minimum over parents.

    ``order`` must list nodes parents-first (topological order of the
    upward graph reversed).
    """
    n = len(indptr) - 1
    depth = np.zeros(n, dtype=np.int64)
    for u in order:
        lo, hi = indptr[u], indptr[u + 1]
        if lo == hi:
            depth[u] = 1
        else:
            depth[u] = 1 + min(depth[indices[k]] for k in range(lo, hi))
    return depth


def dijkstra_distance(indptr, indices, weights, src, dst):
    """Minimum total weight from ``src`` to ``dst`` (non-negative weights), or inf."""
    if src == dst:
        return 0.0
    best = {src: 0.0}
    heap = [(0.0, src)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        if u == dst:
            return d
        done.add(u)
        for k in range(indptr[u], indptr[u + 1]):
            v = int(indices[k])
            nd = d + weights[k]
            if nd < best.get(v, math.inf):
                best[v] = nd
                heapq.heappush(heap, (nd, v))
    return math.inf
