"""Corpus counts to concept probabilities and information content.

Frequency files are line based::

    N 250000          # optional corpus size header
    car 120
    automobile 40

The same format holds word counts (``kind="word"``) or per-concept sense
counts (``kind="sense"``).
"""
from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from taxosim import kernels
from taxosim.errors import MissingICError, ParseError, UnknownConceptError

SCHEMES = ("word-resnik", "word-richardson", "sense")
ESTIMATORS = ("mle", "good-turing")


@dataclass(frozen=True)
class FrequencyTable:
    kind: str
    counts: Mapping[str, int]
    total_N: int

    def __post_init__(self):
        if self.kind not in ("word", "sense"):
            raise ValueError(f"frequency kind must be 'word' or 'sense', got {self.kind!r}")
        if self.total_N < 1:
            raise ValueError("total_N must be >= 1")
        if any(v < 0 for v in self.counts.values()):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", MappingProxyType(dict(self.counts)))

    @classmethod
    def from_counts(cls, counts, kind="word", total_N=None):
        counts = dict(counts)
        if total_N is None:
            total_N = max(1, sum(counts.values()))
        return cls(kind, counts, total_N)


@dataclass(frozen=True)
class ICTable:
    """Per-concept probability and information content.

    ``ic`` holds ``math.inf`` for zero-probability concepts.
    """

    prob: Mapping[str, float]
    ic: Mapping[str, float]
    log_base: float = 2.0
    estimator: str = "mle"
    meta: Mapping[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "prob", MappingProxyType(dict(self.prob)))
        object.__setattr__(self, "ic", MappingProxyType(dict(self.ic)))

    def __contains__(self, c):
        return c in self.ic

    def __getitem__(self, c):
        try:
            return self.ic[c]
        except KeyError:
            raise MissingICError(c) from None


def load_frequencies(source, kind="word", name=None):
    """Parse a frequency file. Duplicate tokens are summed with a warning."""
    if name is None:
        name = getattr(source, "name", None)
    counts = Counter()
    header_N = None
    for lineno, raw in enumerate(source, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) != 2:
            raise ParseError("expected '<token> <count>'", lineno, name)
        try:
            value = int(tok[1])
        except ValueError:
            raise ParseError(f"count {tok[1]!r} is not an integer", lineno, name) from None
        if value < 0:
            raise ParseError(f"negative count for {tok[0]!r}", lineno, name)
        if tok[0] == "N" and header_N is None and not counts:
            header_N = value
            continue
        if tok[0] in counts:
            warnings.warn(f"{name or '<frequencies>'}:{lineno}: duplicate token {tok[0]!r}; counts summed")
        counts[tok[0]] += value
    total = header_N if header_N is not None else sum(counts.values())
    if total < 1:
        raise ParseError("corpus size must be at least 1", None, name)
    return FrequencyTable(kind, dict(counts), total)


# -- propagation ---------------------------------------------------------


def _propagate_own(t, own):
    """Sum every concept's own mass once into itself and each subsumer."""
    total = kernels.propagate(t._up_ptr, t._up_idx, own)
    return {c: float(v) for c, v in zip(t.concepts, total)}


def _word_own(t, word_mass, split_senses):
    own = np.zeros(len(t.concepts))
    for w, mass in word_mass.items():
        senses = t.word_index.get(w)
        if not senses or mass == 0:
            continue
        share = mass / len(senses) if split_senses else mass
        for c in senses:
            own[t._index[c]] += share
    return own


def concept_freq_resnik(t, f):
    """freq(c): each word's count added to every concept carrying it, then propagated up."""
    _require_kind(f, "word")
    return _propagate_own(t, _word_own(t, f.counts, split_senses=False))


def concept_freq_richardson(t, f):
    """As :func:`concept_freq_resnik` but each word's count is split evenly over its senses."""
    _require_kind(f, "word")
    return _propagate_own(t, _word_own(t, f.counts, split_senses=True))


def concept_freq_tagged(t, f):
    _require_kind(f, "sense")
    own = np.zeros(len(t.concepts))
    for c, n in f.counts.items():
        if c not in t:
            raise UnknownConceptError(c)
        own[t._index[c]] += n
    return _propagate_own(t, own)


def _require_kind(f, kind):
    if f.kind != kind:
        raise ValueError(f"expected a {kind}-kind frequency table, got {f.kind!r}")


def concept_frequencies(t, f, scheme):
    if scheme == "word-resnik":
        return concept_freq_resnik(t, f)
    if scheme == "word-richardson":
        return concept_freq_richardson(t, f)
    if scheme == "sense":
        return concept_freq_tagged(t, f)
    raise ValueError(f"unknown propagation scheme {scheme!r}; expected one of {SCHEMES}")


# -- estimators ----------------------------------------------------------


def mle_probability(cf, total_N):
    if total_N <= 0:
        raise ValueError("total_N must be positive")
    return {c: min(1.0, max(0.0, v / total_N)) for c, v in cf.items()}


def _sgt_smoothed_counts(r, n_r):
    """Simple Good-Turing r* for each observed count ``r`` (sorted, with counts ``n_r``).

    Z_r averages N_r over the gap to its neighbours; log Z_r is regressed on
    log r; Turing's estimate is used while it differs significantly from the
    regression estimate, and the regression estimate from the first r where
    it does not. Also returns the fitted S(1), which stands in for N_1 when
    no event was seen exactly once.
    """
    k = len(r)
    z = np.empty(k)
    for i in range(k):
        left = r[i - 1] if i > 0 else 0
        right = r[i + 1] if i < k - 1 else 2 * r[i] - left
        z[i] = 2.0 * n_r[i] / (right - left)
    slope, intercept = np.polyfit(np.log(r), np.log(z), 1)

    def smoothed(x):
        return math.exp(intercept + slope * math.log(x))

    present = {int(x): int(n) for x, n in zip(r, n_r)}
    r_star = np.empty(k)
    use_regression = False
    for i in range(k):
        ri = int(r[i])
        y = (ri + 1) * smoothed(ri + 1) / smoothed(ri)
        nxt = present.get(ri + 1)
        if nxt is None:
            use_regression = True
        if not use_regression:
            nr = present[ri]
            x = (ri + 1) * nxt / nr
            spread = 1.96 * math.sqrt((ri + 1) ** 2 * (nxt / nr**2) * (1 + nxt / nr))
            if abs(x - y) > spread:
                r_star[i] = x
                continue
            use_regression = True
        r_star[i] = y
    return r_star, smoothed(1)


def good_turing_probability(counts, total_N=None):
    """Simple Good-Turing probabilities over a set of events.

    ``counts`` maps every event (seen or not) to a non-negative integer count.
    Unseen events split the N_1/N mass evenly (the fitted S(1) replaces N_1
    when nothing was seen once); seen events share the rest in proportion to
    their smoothed counts. If ``total_N`` exceeds the summed
    counts, all probabilities are scaled by sum/total_N so mass outside the
    event set is preserved.

    With fewer than two distinct non-zero counts no regression is possible and
    add-one smoothing is used instead (with a warning).
    """
    items = list(counts.items())
    values = np.array([v for _, v in items], dtype=np.int64)
    if values.size == 0 or values.min() < 0:
        raise ValueError("counts must be a non-empty mapping of non-negative integers")
    seen_total = int(values.sum())
    if seen_total == 0:
        raise ValueError("at least one count must be non-zero")
    if total_N is None:
        total_N = seen_total
    if total_N < seen_total:
        raise ValueError("total_N is smaller than the summed counts")
    scale = seen_total / total_N

    r, n_r = np.unique(values[values > 0], return_counts=True)
    if r.size < 2:
        warnings.warn("Good-Turing needs at least two distinct counts; using add-one smoothing")
        denom = seen_total + len(items)
        return {e: scale * (v + 1) / denom for e, v in items}

    n_unseen = int((values == 0).sum())
    r_star, s1 = _sgt_smoothed_counts(r, n_r)
    # no singletons: the fitted S(1) keeps unseen events above zero
    n1 = float(n_r[0]) if r[0] == 1 else min(s1, 0.5 * seen_total)
    p_unseen = n1 / seen_total if n_unseen else 0.0
    norm = float((r_star * n_r).sum())
    lookup = {int(x): (1.0 - p_unseen) * rs / norm for x, rs in zip(r, r_star)}
    unseen_each = p_unseen / n_unseen if n_unseen else 0.0
    return {e: scale * (lookup[v] if v > 0 else unseen_each) for e, v in items}


def information_content(prob, log_base=2.0, estimator="mle"):
    if log_base <= 1:
        raise ValueError("log base must be > 1")
    lb = math.log(log_base)
    ic = {}
    for c, p in prob.items():
        if p > 0:
            # -log(1) is -0.0; keep the root at +0
            ic[c] = max(0.0, -math.log(p) / lb)
        else:
            ic[c] = math.inf
    return ICTable(prob, ic, log_base, estimator)


def _sgt_event_counts(t, f, scheme):
    """The independent events smoothing runs over, with zero-count events included."""
    if scheme == "sense":
        events = {c: 0 for c in t.concepts if c != t.virtual_root}
        for c, n in f.counts.items():
            if c not in t:
                raise UnknownConceptError(c)
            events[c] = n
        return events
    events = {w: 0 for w in t.word_index}
    events.update(f.counts)
    return events


def estimate_ic(t, f, scheme="sense", estimator="mle", log_base=2.0):
    """Full pipeline from a frequency table to an ICTable for every concept.

    Good-Turing smooths the individual event counts (words or sense tags)
    before propagation, so parent/child monotonicity and the root's total
    mass bound carry over from the propagation step unchanged. A concept
    whose subtree carries no words at all still ends up with probability 0.
    """
    if estimator == "mle":
        prob = mle_probability(concept_frequencies(t, f, scheme), f.total_N)
    elif estimator == "good-turing":
        p_event = good_turing_probability(_sgt_event_counts(t, f, scheme), f.total_N)
        if scheme == "sense":
            own = np.zeros(len(t.concepts))
            for c, p in p_event.items():
                own[t._index[c]] = p
        else:
            own = _word_own(t, p_event, split_senses=(scheme == "word-richardson"))
        prob = {c: min(1.0, p) for c, p in _propagate_own(t, own).items()}
    else:
        raise ValueError(f"unknown estimator {estimator!r}; expected one of {ESTIMATORS}")
    return information_content(prob, log_base, estimator)


# -- IC file I/O -----------------------------------------------------------


def format_ic_table(ic_table, concepts=None):
    """``<concept>\\t<prob>\\t<ic>`` lines sorted by id, 12 significant digits."""
    ids = sorted(concepts if concepts is not None else ic_table.ic)
    return "".join(
        f"{c}\t{ic_table.prob.get(c, 0.0):.12g}\t{ic_table.ic[c]:.12g}\n" for c in ids
    )


def load_ic(source, taxonomy=None, log_base=2.0, name=None):
    """Read an IC file written by :func:`format_ic_table`.

    The IC column is taken verbatim. A virtual root missing from the file is
    added with probability 1 and IC 0.
    """
    if name is None:
        name = getattr(source, "name", None)
    prob, ic = {}, {}
    for lineno, raw in enumerate(source, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) != 3:
            raise ParseError("expected '<concept>\\t<prob>\\t<ic>'", lineno, name)
        c = tok[0]
        try:
            p, v = float(tok[1]), float(tok[2])
        except ValueError:
            raise ParseError("probability and IC must be numbers", lineno, name) from None
        if not (0.0 <= p <= 1.0) or v < 0 or math.isnan(v):
            raise ParseError(f"out-of-range values for {c!r}", lineno, name)
        if c in ic:
            raise ParseError(f"duplicate concept {c!r}", lineno, name)
        if taxonomy is not None and c not in taxonomy:
            raise ParseError(f"unknown concept {c!r}", lineno, name)
        prob[c], ic[c] = p, v
    if taxonomy is not None and taxonomy.virtual_root and taxonomy.virtual_root not in ic:
        prob[taxonomy.virtual_root], ic[taxonomy.virtual_root] = 1.0, 0.0
    return ICTable(prob, ic, log_base, "file")
