"""Time the compiled graph kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--nodes 3000] [--repeat 3]

Both backends run on the same random multi-parent taxonomy; results are
checked for agreement before timing.
"""
import argparse
import random
import timeit

import numpy as np

from taxosim import Edge, Taxonomy
from taxosim import kernels


def build(n, seed):
    rng = random.Random(seed)
    ids = [f"n{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        for p in rng.sample(range(max(0, i - 200), i), min(i, rng.randint(1, 2))):
            edges.append(Edge(ids[i], ids[p]))
    return Taxonomy(ids, edges), rng


def workloads(t, rng):
    n = len(t.concepts)
    own = np.array([rng.random() for _ in range(n)])
    order = kernels.index_array(t._order)
    pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(20)]
    weights = np.array([rng.uniform(0.1, 2.0) for _ in range(len(t._nb_idx))])
    # keep weights symmetric so both directions of an edge agree
    lookup = {}
    for u in range(n):
        for k in range(t._nb_ptr[u], t._nb_ptr[u + 1]):
            v = int(t._nb_idx[k])
            weights[k] = lookup.setdefault((min(u, v), max(u, v)), weights[k])

    return {
        "propagate": lambda k: k.propagate(t._up_ptr, t._up_idx, own),
        "min_depths": lambda k: k.min_depths(t._up_ptr, t._up_idx, order),
        "upward_distances x20": lambda k: [k.upward_distances(t._up_ptr, t._up_idx, a) for a, _ in pairs],
        "bfs_distance x20": lambda k: [k.bfs_distance(t._nb_ptr, t._nb_idx, a, b) for a, b in pairs],
        "dijkstra x20": lambda k: [k.dijkstra_distance(t._nb_ptr, t._nb_idx, weights, a, b) for a, b in pairs],
    }


def same(a, b):
    if isinstance(a, np.ndarray):
        return np.allclose(a, b)
    if isinstance(a, list):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, dict):
        return a.keys() == b.keys() and all(a[k] == b[k] for k in a)
    return abs(a - b) <= 1e-9 * max(1.0, abs(a))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=3000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t, rng = build(args.nodes, args.seed)
    jobs = workloads(t, rng)
    backends = kernels.available_backends()
    print(f"{args.nodes} concepts, {len(t.edges)} edges; backends: {', '.join(backends)}")
    if "cython" not in backends:
        print("compiled kernels not built; timing the Python fallback only")

    print(f"{'kernel':<22}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, job in jobs.items():
        mods = [kernels.get_backend(b) for b in backends]
        outs = [job(m) for m in mods]
        if len(outs) > 1 and not same(outs[0], outs[1]):
            raise SystemExit(f"{name}: backends disagree")
        times = [min(timeit.repeat(lambda m=m: job(m), number=1, repeat=args.repeat)) for m in mods]
        row = f"{name:<22}" + "".join(f"{x * 1000:>10.2f}ms" for x in times)
        if len(times) > 1:
            row += f"{times[1] / times[0]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
