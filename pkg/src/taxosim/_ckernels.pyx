# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels; see ``_pykernels`` for the reference versions."""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef cnp.int32_t idx_t


def bfs_distance(const idx_t[::1] indptr, const idx_t[::1] indices, Py_ssize_t src, Py_ssize_t dst):
    if src == dst:
        return 0
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef int *dist = <int *> malloc(n * sizeof(int))
    cdef idx_t *queue = <idx_t *> malloc(n * sizeof(idx_t))
    cdef Py_ssize_t head = 0, tail = 0, k, i
    cdef idx_t u, v
    cdef int du, result = -1
    if dist == NULL or queue == NULL:
        free(dist)
        free(queue)
        raise MemoryError()
    for i in range(n):
        dist[i] = -1
    dist[src] = 0
    queue[tail] = <idx_t> src
    tail += 1
    while head < tail and result < 0:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if dist[v] >= 0:
                continue
            if v == dst:
                result = du
                break
            dist[v] = du
            queue[tail] = v
            tail += 1
    free(dist)
    free(queue)
    return result


def upward_distances(const idx_t[::1] indptr, const idx_t[::1] indices, Py_ssize_t src):
    # Ancestor sets are small compared to n, so a dict-backed visited set wins
    # over an O(n) scratch array here.
    cdef dict dist = {src: 0}
    cdef list queue = [src]
    cdef Py_ssize_t head = 0, k
    cdef idx_t u, v
    cdef int du
    while head < len(queue):
        u = queue[head]
        head += 1
        du = <int> dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if v not in dist:
                dist[v] = du
                queue.append(v)
    return dist


def propagate(const idx_t[::1] indptr, const idx_t[::1] indices, const double[::1] own):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    total_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] total = total_arr
    cdef idx_t[::1] stamp = np.full(n, -1, dtype=np.int32)
    cdef idx_t[::1] stack = np.empty(max(n, 1), dtype=np.int32)
    cdef Py_ssize_t s, top, k
    cdef idx_t u, v
    cdef double mass
    for s in range(n):
        mass = own[s]
        if mass == 0.0:
            continue
        stamp[s] = <idx_t> s
        stack[0] = <idx_t> s
        top = 1
        while top > 0:
            top -= 1
            u = stack[top]
            total[u] += mass
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if stamp[v] != s:
                    stamp[v] = <idx_t> s
                    stack[top] = v
                    top += 1
    return total_arr


def min_depths(const idx_t[::1] indptr, const idx_t[::1] indices, const idx_t[::1] order):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    depth_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] depth = depth_arr
    cdef Py_ssize_t i, k
    cdef idx_t u
    cdef cnp.int64_t best
    for i in range(order.shape[0]):
        u = order[i]
        if indptr[u] == indptr[u + 1]:
            depth[u] = 1
            continue
        best = depth[indices[indptr[u]]]
        for k in range(indptr[u] + 1, indptr[u + 1]):
            if depth[indices[k]] < best:
                best = depth[indices[k]]
        depth[u] = best + 1
    return depth_arr


cdef inline void _sift_up(double *key, idx_t *node, Py_ssize_t i) nogil:
    cdef Py_ssize_t parent
    cdef double kk = key[i]
    cdef idx_t nn = node[i]
    while i > 0:
        parent = (i - 1) >> 1
        if key[parent] <= kk:
            break
        key[i] = key[parent]
        node[i] = node[parent]
        i = parent
    key[i] = kk
    node[i] = nn


cdef inline void _sift_down(double *key, idx_t *node, Py_ssize_t size) nogil:
    cdef Py_ssize_t i = 0, child
    cdef double kk = key[0]
    cdef idx_t nn = node[0]
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        if child + 1 < size and key[child + 1] < key[child]:
            child += 1
        if key[child] >= kk:
            break
        key[i] = key[child]
        node[i] = node[child]
        i = child
    key[i] = kk
    node[i] = nn


def dijkstra_distance(const idx_t[::1] indptr, const idx_t[::1] indices,
                      const double[::1] weights, Py_ssize_t src, Py_ssize_t dst):
    if src == dst:
        return 0.0
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t m = indices.shape[0] + 1
    cdef double *best = <double *> malloc(n * sizeof(double))
    cdef double *hkey = <double *> malloc(m * sizeof(double))
    cdef idx_t *hnode = <idx_t *> malloc(m * sizeof(idx_t))
    cdef char *done = <char *> malloc(n * sizeof(char))
    cdef Py_ssize_t size = 0, i, k
    cdef double d, nd, result = INFINITY
    cdef idx_t u, v
    if best == NULL or hkey == NULL or hnode == NULL or done == NULL:
        free(best)
        free(hkey)
        free(hnode)
        free(done)
        raise MemoryError()
    with nogil:
        for i in range(n):
            best[i] = INFINITY
            done[i] = 0
        best[src] = 0.0
        hkey[0] = 0.0
        hnode[0] = <idx_t> src
        size = 1
        while size > 0:
            d = hkey[0]
            u = hnode[0]
            size -= 1
            if size > 0:
                hkey[0] = hkey[size]
                hnode[0] = hnode[size]
                _sift_down(hkey, hnode, size)
            if done[u]:
                continue
            if u == dst:
                result = d
                break
            done[u] = 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                nd = d + weights[k]
                if nd < best[v] and size < m:
                    best[v] = nd
                    hkey[size] = nd
                    hnode[size] = v
                    _sift_up(hkey, hnode, size)
                    size += 1
    free(best)
    free(hkey)
    free(hnode)
    free(done)
    return result
