"""Random fixture generators and brute-force oracles shared by the tests.

The oracles deliberately avoid the library's kernels: they work on plain
edge lists with Floyd-Warshall, explicit closure and exhaustive enumeration.
"""
import itertools
import math
import random

from taxosim import Edge, Taxonomy


def random_tree(rng, n, words=False):
    ids = [f"n{i}" for i in range(n)]
    edges = [Edge(ids[i], ids[rng.randrange(i)]) for i in range(1, n)]
    w = {c: [f"w{i}"] for i, c in enumerate(ids)} if words else None
    return Taxonomy(ids, edges, w)


def random_dag(rng, n, max_parents=3, words=False):
    """Random DAG with multiple inheritance (so diamonds are common)."""
    ids = [f"n{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        k = rng.randint(1, min(max_parents, i))
        for p in rng.sample(range(i), k):
            edges.append(Edge(ids[i], ids[p]))
    w = None
    if words:
        vocab = [f"w{j}" for j in range(max(2, n // 2))]
        w = {c: rng.sample(vocab, rng.randint(1, 2)) for c in ids}
    return Taxonomy(ids, edges, w)


def random_forest(rng, n, n_roots):
    ids = [f"n{i}" for i in range(n)]
    edges = [Edge(ids[i], ids[rng.randrange(i)]) for i in range(n_roots, n)]
    return Taxonomy(ids, edges)


def monotone_ic(rng, t, spread=3.0):
    """IC values that never decrease from parent to child; root(s) at 0."""
    ic = {}
    for c in _parents_first(t):
        ps = t.parents(c)
        base = max((ic[p] for p in ps), default=0.0)
        ic[c] = 0.0 if not ps else base + rng.uniform(0.0, spread)
    return ic


def _parents_first(t):
    return [t.concepts[i] for i in t._order]


def real_edges(t):
    return [e for e in t.edges if not e.is_virtual and e.relation in t.relations]


def floyd_warshall(t, weight=None):
    """All-pairs shortest paths over undirected hierarchy edges (no virtual links)."""
    ids = list(t.concepts)
    d = {(a, b): (0.0 if a == b else math.inf) for a in ids for b in ids}
    for e in real_edges(t):
        w = 1.0 if weight is None else weight(e)
        for a, b in ((e.child, e.parent), (e.parent, e.child)):
            d[(a, b)] = min(d[(a, b)], w)
    for k in ids:
        for i in ids:
            dik = d[(i, k)]
            if dik == math.inf:
                continue
            for j in ids:
                if dik + d[(k, j)] < d[(i, j)]:
                    d[(i, j)] = dik + d[(k, j)]
    return d


def ancestor_closure(t):
    """concept -> set of ancestors including itself, via fixpoint iteration."""
    parents = {c: set() for c in t.concepts}
    for e in t.edges:
        if e.is_virtual or e.relation in t.relations:
            parents[e.child].add(e.parent)
    anc = {c: {c} for c in t.concepts}
    changed = True
    while changed:
        changed = False
        for c in t.concepts:
            new = set(anc[c])
            for p in parents[c]:
                new |= anc[p]
            if new != anc[c]:
                anc[c] = new
                changed = True
    return anc


def descendant_closure(t):
    anc = ancestor_closure(t)
    desc = {c: set() for c in t.concepts}
    for c, ups in anc.items():
        for a in ups:
            desc[a].add(c)
    return desc


def brute_depth(t, c):
    """1 + fewest parent hops to any parentless node, by enumerating all upward chains."""
    parents = {x: [] for x in t.concepts}
    for e in t.edges:
        if e.is_virtual or e.relation in t.relations:
            parents[e.child].append(e.parent)

    def chains(x):
        if not parents[x]:
            return [1]
        return [1 + k for p in parents[x] for k in chains(p)]

    return min(chains(c))


def all_simple_path_min(t, a, b, weight):
    """Minimum total weight over every simple undirected path from a to b."""
    adj = {c: [] for c in t.concepts}
    for e in real_edges(t):
        adj[e.child].append((e.parent, e))
        adj[e.parent].append((e.child, e))
    best = math.inf
    stack = [(a, 0.0, frozenset([a]))]
    while stack:
        u, cost, seen = stack.pop()
        if u == b:
            best = min(best, cost)
            continue
        for v, e in adj[u]:
            if v not in seen:
                stack.append((v, cost + weight(e), seen | {v}))
    return best


def pairs(t):
    return list(itertools.product(t.concepts, repeat=2))


def seeded(seed):
    return random.Random(seed)
