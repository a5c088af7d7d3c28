"""Similarity and distance measures over a taxonomy.

Measure ids used by the CLI and the evaluation harness:

``edge``            shortest-path edge counting, 2*d_max - len
``resnik``          IC of the most informative common subsumer
``sussna``          depth-scaled relation weights summed along the cheapest path
``jc``              combined edge weights (link strength, density, depth, type)
``jc-simplified``   IC(c1) + IC(c2) - 2*IC(lowest subsumer)
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from taxosim import kernels
from taxosim.errors import (
    InfiniteICError,
    MissingICError,
    TaxosimError,
    UnreachableError,
)
from taxosim.taxonomy import VIRTUAL_RELATION

MEASURES = ("edge", "resnik", "sussna", "jc", "jc-simplified")
DISTANCE_MEASURES = frozenset({"sussna", "jc", "jc-simplified"})
IC_MEASURES = frozenset({"resnik", "jc", "jc-simplified"})

SUSSNA_DEFAULT_MIN = 1.0
SUSSNA_DEFAULT_MAX = 2.0


@dataclass(frozen=True)
class MeasureConfig:
    """Parameters shared by all measures.

    ``d_max`` and ``conversion_c`` default to the taxonomy's maximum depth and
    ``2 * d_max``; use :meth:`resolve_d_max` / :meth:`resolve_conversion_c`.
    """

    alpha: float = 0.5
    beta: float = 0.3
    type_factors: Mapping[str, float] = field(default_factory=dict)
    sussna_min: Mapping[str, float] = field(default_factory=dict)
    sussna_max: Mapping[str, float] = field(default_factory=dict)
    conversion_c: Optional[float] = None
    d_max: Optional[int] = None
    log_base: float = 2.0
    lsuper: str = "ic"

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        if self.alpha < 0:
            warnings.warn(f"alpha={self.alpha} is negative; the depth factor expects alpha >= 0")
        if self.d_max is not None and self.d_max < 1:
            raise ValueError("d_max must be a positive integer")
        if self.lsuper not in ("ic", "depth"):
            raise ValueError(f"lsuper must be 'ic' or 'depth', got {self.lsuper!r}")
        for rel in set(self.sussna_min) | set(self.sussna_max):
            lo, hi = self.sussna_range(rel)
            if lo > hi:
                raise ValueError(f"sussna_min > sussna_max for relation {rel!r}")

    def sussna_range(self, relation):
        return (
            self.sussna_min.get(relation, SUSSNA_DEFAULT_MIN),
            self.sussna_max.get(relation, SUSSNA_DEFAULT_MAX),
        )

    def type_factor(self, relation):
        return self.type_factors.get(relation, 1.0)

    def resolve_d_max(self, t):
        return self.d_max if self.d_max is not None else t.max_depth()

    def resolve_conversion_c(self, t):
        if self.conversion_c is not None:
            return self.conversion_c
        return 2.0 * self.resolve_d_max(t)

    def _key(self):
        return (
            tuple(sorted(self.sussna_min.items())),
            tuple(sorted(self.sussna_max.items())),
        )


@dataclass(frozen=True)
class MeasureResult:
    value: float
    kind: str
    subsumer: Optional[str] = None
    path_len: Optional[int] = None
    senses: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("similarity", "distance"):
            raise ValueError(f"result kind must be 'similarity' or 'distance', got {self.kind!r}")
        if self.kind == "distance" and self.value < 0:
            raise ValueError(f"negative distance {self.value}")


def _finite_ic(ic, c):
    values = ic.ic if hasattr(ic, "ic") else ic
    try:
        v = values[c]
    except KeyError:
        raise MissingICError(c) from None
    if math.isinf(v):
        raise InfiniteICError(f"concept {c!r} has zero probability (infinite IC)")
    return v


# -- edge counting and node-based --------------------------------------


def sim_edge_counting(t, c1, c2, cfg=None):
    cfg = cfg or MeasureConfig()
    length = t.shortest_path_length(c1, c2)
    if length is None:
        return MeasureResult(0.0, "similarity")
    return MeasureResult(float(2 * cfg.resolve_d_max(t) - length), "similarity", path_len=length)


def sim_resnik(t, ic, c1, c2, cfg=None):
    top = t.most_informative_subsumer(ic, c1, c2)
    if top == t.virtual_root:
        return MeasureResult(0.0, "similarity", subsumer=top)
    return MeasureResult(_finite_ic(ic, top), "similarity", subsumer=top)


# -- Sussna ----------------------------------------------------------------


def sussna_directed_weight(t, x, y, relation, cfg=None):
    """Weight of the ``relation`` link leaving ``x`` toward ``y``.

    ``max_r - (max_r - min_r) / n_r(x)``, where n_r(x) counts links of that
    relation leaving ``x`` in the same direction (to parents when ``y`` is a
    parent of ``x``, to children otherwise).
    """
    cfg = cfg or MeasureConfig()
    if _has_edge(t, x, y, relation):
        direction = "up"
    elif _has_edge(t, y, x, relation):
        direction = "down"
    else:
        raise ValueError(f"no {relation!r} link between {x!r} and {y!r}")
    lo, hi = cfg.sussna_range(relation)
    n = t.relation_count(x, relation, direction)
    return hi - (hi - lo) / n


def _has_edge(t, child, parent, relation):
    edges = t._memo.get("edge_set")
    if edges is None:
        edges = t._memo["edge_set"] = frozenset((e.child, e.parent, e.relation) for e in t.edges)
    return (child, parent, relation) in edges


def sussna_edge_weight(t, c1, c2, cfg=None):
    """Mean of both directed weights divided by the depth of the deeper node."""
    cfg = cfg or MeasureConfig()
    try:
        e = t.link(c1, c2)
    except KeyError:
        try:
            e = t.link(c2, c1)
        except KeyError:
            raise ValueError(f"{c1!r} and {c2!r} are not adjacent") from None
    if e.relation == VIRTUAL_RELATION:
        raise ValueError("virtual-root links carry no Sussna weight")
    w_up = sussna_directed_weight(t, e.child, e.parent, e.relation, cfg)
    w_down = sussna_directed_weight(t, e.parent, e.child, e.relation, cfg)
    deeper = max(t.depth(c1), t.depth(c2))
    return (w_up + w_down) / (2.0 * deeper)


def _sussna_weights(t, cfg):
    key = ("sussna", cfg._key())
    weights = t._memo.get(key)
    if weights is None:
        weights = np.empty(len(t._nb_idx))
        for u in range(len(t.concepts)):
            cu = t.concepts[u]
            for k in range(t._nb_ptr[u], t._nb_ptr[u + 1]):
                weights[k] = sussna_edge_weight(t, cu, t.concepts[t._nb_idx[k]], cfg)
        t._memo[key] = weights
    return weights


def sussna_distance(t, c1, c2, cfg=None):
    cfg = cfg or MeasureConfig()
    d = kernels.dijkstra_distance(
        t._nb_ptr, t._nb_idx, _sussna_weights(t, cfg), t.index(c1), t.index(c2)
    )
    if math.isinf(d):
        raise UnreachableError(f"no path between {c1!r} and {c2!r}")
    return MeasureResult(float(d), "distance")


# -- combined model ----------------------------------------------------------


def link_strength(t, ic, c, p):
    """IC(c) - IC(p) across the hierarchy edge ``c -> p``."""
    t.link(c, p)
    return _finite_ic(ic, c) - _finite_ic(ic, p)


def combined_edge_weight(t, ic, c, p, cfg=None):
    """Weight of the edge from child ``c`` to parent ``p``.

    (beta + (1 - beta) * avg_density / density(p)) * ((depth(p) + 1) / depth(p)) ** alpha
    * link_strength(c, p) * T(c, p). On a virtual-root link the density and
    type factors are 1.
    """
    cfg = cfg or MeasureConfig()
    e = t.link(c, p)
    ls = _finite_ic(ic, c) - _finite_ic(ic, p)
    dp = t.depth(p)
    depth_factor = ((dp + 1.0) / dp) ** cfg.alpha
    if e.relation == VIRTUAL_RELATION:
        return depth_factor * ls
    local = t.local_density(p)
    if local == 0:
        raise TaxosimError(f"parent {p!r} has no child links")
    density_factor = cfg.beta + (1.0 - cfg.beta) * t.average_density() / local
    return density_factor * depth_factor * ls * e.type_factor * cfg.type_factor(e.relation)


def combined_distance(t, ic, c1, c2, cfg=None):
    """Sum of combined edge weights along both legs up to the lowest subsumer."""
    cfg = cfg or MeasureConfig()
    top = t.lowest_subsumer(ic, c1, c2, by=cfg.lsuper)
    total = 0.0
    hops = 0
    for start in (c1, c2):
        leg = t.upward_chain(start, top)
        hops += len(leg) - 1
        for child, parent in zip(leg, leg[1:]):
            total += combined_edge_weight(t, ic, child, parent, cfg)
    return MeasureResult(max(0.0, total), "distance", subsumer=top, path_len=hops)


def jc_distance_simplified(t, ic, c1, c2, cfg=None):
    by = cfg.lsuper if cfg is not None else "ic"
    top = t.lowest_subsumer(ic, c1, c2, by=by)
    value = _finite_ic(ic, c1) + _finite_ic(ic, c2) - 2.0 * _finite_ic(ic, top)
    # rounding can leave -1e-16 on identical concepts
    return MeasureResult(max(0.0, value), "distance", subsumer=top)


def distance_to_similarity(d, cfg=None, t=None):
    """``C - distance``; C is cfg.conversion_c, or 2 * d_max when unset."""
    if d.kind != "distance":
        raise ValueError("expected a distance result")
    cfg = cfg or MeasureConfig()
    if cfg.conversion_c is not None:
        c = cfg.conversion_c
    elif t is not None:
        c = cfg.resolve_conversion_c(t)
    else:
        raise ValueError("conversion_c is unset and no taxonomy was given to derive it")
    return MeasureResult(c - d.value, "similarity", d.subsumer, d.path_len, d.senses)


# -- dispatch ------------------------------------------------------------


def concept_measure(measure_id, t, ic=None, cfg=None):
    """Return ``f(c1, c2) -> MeasureResult`` for a measure id."""
    cfg = cfg or MeasureConfig()
    if measure_id not in MEASURES:
        raise ValueError(f"unknown measure {measure_id!r}; expected one of {MEASURES}")
    if measure_id in IC_MEASURES and ic is None:
        raise ValueError(f"measure {measure_id!r} needs information content")
    if measure_id == "edge":
        return lambda c1, c2: sim_edge_counting(t, c1, c2, cfg)
    if measure_id == "resnik":
        return lambda c1, c2: sim_resnik(t, ic, c1, c2, cfg)
    if measure_id == "sussna":
        return lambda c1, c2: sussna_distance(t, c1, c2, cfg)
    if measure_id == "jc":
        return lambda c1, c2: combined_distance(t, ic, c1, c2, cfg)
    return lambda c1, c2: jc_distance_simplified(t, ic, c1, c2, cfg)


def word_similarity(t, measure, w1, w2):
    """Best value over every sense pair of two words.

    ``measure`` is a callable from :func:`concept_measure`. Similarities take
    the maximum and distances the minimum; the first winning pair in sorted
    sense order is recorded. Sense pairs with no connecting path are skipped
    unless every pair is unreachable.
    """
    senses1 = sorted(t.senses(w1))
    senses2 = sorted(t.senses(w2))
    best = None
    unreachable = None
    for c1 in senses1:
        for c2 in senses2:
            try:
                res = measure(c1, c2)
            except UnreachableError as exc:
                unreachable = exc
                continue
            if best is None:
                best = (res, c1, c2)
                continue
            better = res.value > best[0].value if res.kind == "similarity" else res.value < best[0].value
            if better:
                best = (res, c1, c2)
    if best is None:
        raise unreachable
    res, c1, c2 = best
    return MeasureResult(res.value, res.kind, res.subsumer, res.path_len, (c1, c2))
