import math

import numpy as np
import pytest

from taxosim import kernels
from helpers import all_simple_path_min, ancestor_closure, floyd_warshall, random_dag, random_tree, seeded

BACKENDS = kernels.available_backends()


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    assert kernels.get_backend("python").__name__.endswith("_pykernels")
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("seed", range(5))
def test_bfs_matches_floyd_warshall(backend, seed):
    k = kernels.get_backend(backend)
    t = random_dag(seeded(seed), 25)
    d = floyd_warshall(t)
    for a in t.concepts:
        for b in t.concepts:
            got = k.bfs_distance(t._nb_ptr, t._nb_idx, t.index(a), t.index(b))
            want = d[(a, b)]
            assert got == (-1 if math.isinf(want) else want)


@pytest.mark.parametrize("backend", BACKENDS)
def test_upward_distances_cover_ancestors(backend):
    k = kernels.get_backend(backend)
    t = random_dag(seeded(11), 30)
    anc = ancestor_closure(t)
    for c in t.concepts:
        got = k.upward_distances(t._up_ptr, t._up_idx, t.index(c))
        assert {t.concepts[i] for i in got} == anc[c]
        assert got[t.index(c)] == 0


@pytest.mark.parametrize("backend", BACKENDS)
def test_propagate_counts_each_ancestor_once(backend):
    k = kernels.get_backend(backend)
    rng = seeded(3)
    t = random_dag(rng, 30)
    own = np.array([rng.randint(0, 5) for _ in t.concepts], dtype=float)
    got = k.propagate(t._up_ptr, t._up_idx, own)
    anc = ancestor_closure(t)
    want = np.zeros(len(t.concepts))
    for c, ups in anc.items():
        for a in ups:
            want[t.index(a)] += own[t.index(c)]
    np.testing.assert_array_equal(got, want)


@pytest.mark.parametrize("backend", BACKENDS)
def test_dijkstra_matches_enumeration(backend):
    k = kernels.get_backend(backend)
    rng = seeded(5)
    t = random_dag(rng, 10, max_parents=2)
    wmap = {}
    for e in t.edges:
        wmap[(e.child, e.parent)] = rng.uniform(0.1, 2.0)
    weights = np.empty(len(t._nb_idx))
    for u in range(len(t.concepts)):
        for j in range(t._nb_ptr[u], t._nb_ptr[u + 1]):
            a, b = t.concepts[u], t.concepts[t._nb_idx[j]]
            weights[j] = wmap.get((a, b), wmap.get((b, a)))
    for a in t.concepts:
        for b in t.concepts:
            got = k.dijkstra_distance(t._nb_ptr, t._nb_idx, weights, t.index(a), t.index(b))
            want = all_simple_path_min(t, a, b, lambda e: wmap[(e.child, e.parent)])
            assert got == pytest.approx(want, abs=1e-12)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")
def test_backends_agree_on_large_tree():
    py, cy = kernels.get_backend("python"), kernels.get_backend("cython")
    rng = seeded(99)
    t = random_tree(rng, 2000)
    own = np.array([rng.random() for _ in t.concepts])
    np.testing.assert_allclose(
        py.propagate(t._up_ptr, t._up_idx, own), cy.propagate(t._up_ptr, t._up_idx, own)
    )
    order = np.asarray(t._order, dtype=np.int32)
    np.testing.assert_array_equal(
        py.min_depths(t._up_ptr, t._up_idx, order), cy.min_depths(t._up_ptr, t._up_idx, order)
    )
    for _ in range(50):
        a, b = rng.randrange(2000), rng.randrange(2000)
        assert py.bfs_distance(t._nb_ptr, t._nb_idx, a, b) == cy.bfs_distance(t._nb_ptr, t._nb_idx, a, b)
