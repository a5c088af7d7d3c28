"""Correlation of similarity scores with human ratings.

Ratings files are tab separated with a header row. The first three columns
are ``word1``, ``word2`` and the human rating; any further columns are named
extras and may hold ``NA``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

import numpy as np

from taxosim.errors import EvaluationError, ParseError, TaxosimError
from taxosim.measures import (
    DISTANCE_MEASURES,
    MeasureConfig,
    concept_measure,
    distance_to_similarity,
    word_similarity,
)

NA = "NA"

# Row and column headers of the published alpha/beta grid.
SWEEP_ALPHAS = (2.0, 1.0, 0.5, 0.0, -1.0, -2.0)
SWEEP_BETAS = (1.0, 0.5, 0.3, 0.2)


@dataclass(frozen=True)
class Rating:
    word1: str
    word2: str
    rating: float
    extras: Mapping[str, Optional[float]] = field(default_factory=dict)


@dataclass(frozen=True)
class RatingDataset:
    name: str
    columns: tuple
    rows: tuple

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        if name == "rating":
            return [r.rating for r in self.rows]
        if name not in self.columns:
            raise EvaluationError(f"unknown column {name!r}; available: {', '.join(self.columns)}")
        return [r.extras.get(name) for r in self.rows]


@dataclass
class EvalReport:
    dataset: str
    target: str
    n: int
    r: float
    skipped: list = field(default_factory=list)

    def as_dict(self):
        return {
            "dataset": self.dataset,
            "target": self.target,
            "n": self.n,
            "r": self.r,
            "skipped": [{"pair": list(p), "reason": why} for p, why in self.skipped],
        }


def _number(token, lineno, name, allow_na):
    if token == NA:
        if allow_na:
            return None
        raise ParseError("NA is not allowed in the rating column", lineno, name)
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"not a number: {token!r}", lineno, name) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {token!r}", lineno, name)
    return value


def load_ratings(source, name=None):
    if name is None:
        name = getattr(source, "name", None) or "ratings"
    lines = [(i, ln.rstrip("\r\n")) for i, ln in enumerate(source, 1)]
    lines = [(i, ln) for i, ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty ratings file", None, name)
    header_no, header = lines[0]
    cols = header.split("\t")
    if len(cols) < 3:
        raise ParseError("header needs at least word1, word2 and rating columns", header_no, name)
    extras = tuple(cols[3:])
    if len(set(extras)) != len(extras):
        raise ParseError("duplicate column names", header_no, name)
    rows = []
    for lineno, line in lines[1:]:
        tok = line.split("\t")
        if len(tok) != len(cols):
            raise ParseError(f"expected {len(cols)} columns, found {len(tok)}", lineno, name)
        rating = _number(tok[2], lineno, name, allow_na=False)
        values = {c: _number(v, lineno, name, allow_na=True) for c, v in zip(extras, tok[3:])}
        rows.append(Rating(tok[0], tok[1], rating, values))
    if len(rows) < 2:
        raise ParseError("a ratings dataset needs at least two rows", None, name)
    return RatingDataset(name, extras, tuple(rows))


def pearson(x, y):
    """Sample product-moment correlation of two equal-length sequences."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise EvaluationError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise EvaluationError("need at least two points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise EvaluationError("zero variance; correlation undefined")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def evaluate_column(ds, column):
    """Correlate the human rating with an extra column, skipping NA rows."""
    values = ds.column(column)
    xs, ys, skipped = [], [], []
    for row, v in zip(ds.rows, values):
        if v is None:
            skipped.append(((row.word1, row.word2), f"{column} is NA"))
            continue
        xs.append(row.rating)
        ys.append(v)
    if len(xs) < 2:
        raise EvaluationError(f"fewer than two usable rows for column {column!r}")
    return EvalReport(ds.name, column, len(xs), pearson(xs, ys), skipped)


def score_pairs(t, ic, cfg, measure_id, ds):
    """Similarity per row (distances converted), or None with a reason."""
    measure = concept_measure(measure_id, t, ic, cfg)
    out = []
    for row in ds.rows:
        try:
            res = word_similarity(t, measure, row.word1, row.word2)
            if measure_id in DISTANCE_MEASURES:
                res = distance_to_similarity(res, cfg, t)
            out.append((res.value, None))
        except TaxosimError as exc:
            out.append((None, str(exc)))
    return out


def evaluate_measure(t, ic, cfg, measure_id, ds):
    xs, ys, skipped = [], [], []
    for row, (value, why) in zip(ds.rows, score_pairs(t, ic, cfg, measure_id, ds)):
        if value is None:
            skipped.append(((row.word1, row.word2), why))
            continue
        xs.append(row.rating)
        ys.append(value)
    if len(xs) < 2:
        raise EvaluationError(f"fewer than two usable pairs for measure {measure_id!r}")
    return EvalReport(ds.name, measure_id, len(xs), pearson(xs, ys), skipped)


@dataclass
class SweepResult:
    alphas: tuple
    betas: tuple
    grid: np.ndarray
    best: tuple

    def as_dict(self):
        return {
            "alphas": list(self.alphas),
            "betas": list(self.betas),
            "grid": self.grid.tolist(),
            "best": {"alpha": self.best[0], "beta": self.best[1], "r": self.best[2]},
        }


def parameter_sweep(t, ic, ds, alphas=SWEEP_ALPHAS, betas=SWEEP_BETAS, cfg=None):
    """Correlation of the combined measure for every (alpha, beta) cell.

    The best cell is the first maximum in row-major order.
    """
    alphas, betas = tuple(alphas), tuple(betas)
    if not alphas or not betas:
        raise EvaluationError("sweep grids must be non-empty")
    base = cfg or MeasureConfig()
    grid = np.empty((len(alphas), len(betas)))
    best = None
    for i, a in enumerate(alphas):
        for j, b in enumerate(betas):
            r = evaluate_measure(t, ic, replace(base, alpha=a, beta=b), "jc", ds).r
            grid[i, j] = r
            if best is None or r > best[2]:
                best = (a, b, r)
    return SweepResult(alphas, betas, grid, best)


def ablate_pair(ds, word1, word2):
    """Drop the row for (word1, word2), in either order."""
    drop = {(word1, word2), (word2, word1)}
    keep = [r for r in ds.rows if (r.word1, r.word2) not in drop]
    if len(keep) == len(ds.rows):
        raise EvaluationError(f"pair {word1}-{word2} not found in {ds.name}")
    return RatingDataset(f"{ds.name}-{word1}-{word2}", ds.columns, tuple(keep))


# -- report formatting -----------------------------------------------------


def format_reports(reports, fmt="tsv"):
    if fmt == "json":
        return json.dumps([r.as_dict() for r in reports], indent=2, sort_keys=True) + "\n"
    lines = ["dataset\ttarget\tn\tr\tskipped"]
    for rep in reports:
        skipped = ";".join(f"{a}-{b}" for (a, b), _ in rep.skipped)
        lines.append(f"{rep.dataset}\t{rep.target}\t{rep.n}\t{rep.r:.6f}\t{skipped}")
    return "\n".join(lines) + "\n"


def format_sweep(result, fmt="tsv"):
    if fmt == "json":
        return json.dumps(result.as_dict(), indent=2, sort_keys=True) + "\n"
    lines = ["alpha\\beta\t" + "\t".join(f"{b:g}" for b in result.betas)]
    for a, row in zip(result.alphas, result.grid):
        lines.append(f"{a:g}\t" + "\t".join(f"{v:.6f}" for v in row))
    a, b, r = result.best
    lines.append(f"# best\talpha={a:g}\tbeta={b:g}\tr={r:.6f}")
    return "\n".join(lines) + "\n"
