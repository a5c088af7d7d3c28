import csv
import io
import json
import statistics

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taxosim import (
    MeasureConfig,
    ablate_pair,
    evaluate_column,
    evaluate_measure,
    load_ratings,
    parameter_sweep,
    pearson,
)
from taxosim.errors import EvaluationError, ParseError
from taxosim.evaluation import format_reports, format_sweep, score_pairs
from conftest import tax
from helpers import monotone_ic, random_tree, seeded

HEADER = "word1\tword2\trating\treplication\tsim_edge\tsim_node\tsim_dist\n"
LINE = "w0 w1 w2 w3 w4".split()


def ratings(text, name="t"):
    return load_ratings(io.StringIO(text), name)


def line_taxonomy():
    ids = [f"c{i}" for i in range(5)]
    text = "".join(f"node {c} {w}\n" for c, w in zip(ids, LINE))
    text += "".join(f"edge {ids[i + 1]} {ids[i]} isa\n" for i in range(4))
    return tax(text)


def line_dataset(sign=1.0, extra=False):
    head = "word1\tword2\trating" + ("\tedge" if extra else "") + "\n"
    body = ""
    for k in range(5):
        score = 2 * 5 - k
        body += f"w0\t{LINE[k]}\t{sign * k * 0.5}"
        body += f"\t{score}" if extra else ""
        body += "\n"
    return ratings(head + body)


# -- loading -------------------------------------------------------------------


def test_load_table_row():
    ds = ratings(HEADER + "car\tautomobile\t3.92\t3.9\t30\t10.358\t30\n"
                 "cemetery\twoodland\t0.95\tNA\t0\t0\t10.672\n")
    assert len(ds) == 2
    row = ds.rows[0]
    assert (row.word1, row.word2, row.rating) == ("car", "automobile", 3.92)
    assert dict(row.extras) == {"replication": 3.9, "sim_edge": 30, "sim_node": 10.358, "sim_dist": 30}
    assert ds.rows[1].extras["replication"] is None


def test_load_shipped(ratings_path):
    with open(ratings_path, encoding="utf-8") as fh:
        ds = load_ratings(fh)
    assert len(ds) == 30
    assert ds.columns == ("replication", "sim_edge", "sim_node", "sim_dist")
    assert sum(v is None for v in ds.column("replication")) == 2


@pytest.mark.parametrize(
    "text",
    [
        "",
        "word1\tword2\n",
        "word1\tword2\trating\na\tb\t1\n",
        "word1\tword2\trating\na\tb\tNA\nc\td\t1\n",
        "word1\tword2\trating\na\tb\t1\nc\td\n",
        "word1\tword2\trating\na\tb\tx\nc\td\t1\n",
        "word1\tword2\trating\tq\tq\na\tb\t1\t1\t1\nc\td\t1\t1\t1\n",
    ],
)
def test_load_errors(text):
    with pytest.raises(ParseError):
        ratings(text)


# -- pearson -------------------------------------------------------------------


def test_pearson_perfect():
    assert pearson([1, 2, 3], [2, 4, 6]) == 1.0
    assert pearson([1, 2, 3], [3, 2, 1]) == -1.0


def test_pearson_errors():
    with pytest.raises(EvaluationError):
        pearson([1, 2], [1, 2, 3])
    with pytest.raises(EvaluationError):
        pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(EvaluationError):
        pearson([1], [1])


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=3, max_size=40),
    st.floats(0.1, 100),
    st.floats(-100, 100),
)
def test_pearson_matches_statistics_and_is_affine_invariant(pts, scale, shift):
    x = [p[0] for p in pts]
    y = [p[1] for p in pts]
    try:
        want = statistics.correlation(x, y)
    except statistics.StatisticsError:
        return
    if statistics.pvariance(x) < 1e-6 or statistics.pvariance(y) < 1e-6:
        return
    got = pearson(x, y)
    assert got == pytest.approx(want, abs=1e-9)
    assert pearson([scale * v + shift for v in x], y) == pytest.approx(got, abs=1e-9)
    assert pearson([shift - scale * v for v in x], y) == pytest.approx(-got, abs=1e-9)


# -- column evaluation ---------------------------------------------------------------


def _oracle(ds, column):
    pairs = [(r.rating, r.extras[column]) for r in ds.rows if r.extras[column] is not None]
    return statistics.correlation([a for a, _ in pairs], [b for _, b in pairs]), len(pairs)


@pytest.mark.parametrize("column, n", [("sim_edge", 30), ("sim_node", 30), ("sim_dist", 30), ("replication", 28)])
def test_evaluate_column_matches_oracle(ratings_path, column, n):
    with open(ratings_path, encoding="utf-8") as fh:
        ds = load_ratings(fh)
    rep = evaluate_column(ds, column)
    want, m = _oracle(ds, column)
    assert rep.n == n == m
    assert rep.r == pytest.approx(want, abs=1e-12)
    if column == "replication":
        assert len(rep.skipped) == 2


@pytest.mark.parametrize("column, r", [("sim_edge", 0.6004), ("sim_node", 0.7941), ("sim_dist", 0.8282)])
def test_measure_columns_reproduce(ratings_path, column, r):
    with open(ratings_path, encoding="utf-8") as fh:
        ds = load_ratings(fh)
    assert evaluate_column(ds, column).r == pytest.approx(r, abs=0.01)


@pytest.mark.parametrize("column, r", [("sim_edge", 0.6042), ("sim_node", 0.8191), ("sim_dist", 0.8654)])
def test_ablation_reproduces(ratings_path, column, r):
    with open(ratings_path, encoding="utf-8") as fh:
        ds = ablate_pair(load_ratings(fh), "furnace", "stove")
    assert len(ds) == 29
    assert evaluate_column(ds, column).r == pytest.approx(r, abs=0.01)


def test_ablation_either_order_and_readd(ratings_path):
    with open(ratings_path, encoding="utf-8") as fh:
        ds = load_ratings(fh)
    a = ablate_pair(ds, "furnace", "stove")
    b = ablate_pair(ds, "stove", "furnace")
    assert a.rows == b.rows
    dropped = [r for r in ds.rows if r not in a.rows]
    assert len(dropped) == 1
    back = type(ds)(ds.name, ds.columns, a.rows + tuple(dropped))
    assert evaluate_column(back, "sim_node").r == pytest.approx(evaluate_column(ds, "sim_node").r, abs=1e-12)
    with pytest.raises(EvaluationError):
        ablate_pair(ds, "furnace", "unicorn")


def test_unknown_column(ratings_path):
    with open(ratings_path, encoding="utf-8") as fh:
        ds = load_ratings(fh)
    with pytest.raises((EvaluationError, KeyError)):
        evaluate_column(ds, "nope")


# -- measure evaluation ------------------------------------------------------------


def test_evaluate_measure_perfect_line():
    t = line_taxonomy()
    cfg = MeasureConfig(d_max=5)
    assert evaluate_measure(t, None, cfg, "edge", line_dataset(-1.0)).r == pytest.approx(1.0)
    assert evaluate_measure(t, None, cfg, "edge", line_dataset(1.0)).r == pytest.approx(-1.0)


def test_evaluate_measure_matches_column():
    t = line_taxonomy()
    ds = line_dataset(1.0, extra=True)
    cfg = MeasureConfig(d_max=5)
    scores = [v for v, _ in score_pairs(t, None, cfg, "edge", ds)]
    assert scores == ds.column("edge")
    a = evaluate_measure(t, None, cfg, "edge", ds).r
    b = evaluate_column(ds, "edge").r
    assert abs(a - b) <= 1e-12


def test_evaluate_measure_skips_unknown_words():
    t = line_taxonomy()
    ds = ratings("word1\tword2\trating\nw0\tw1\t1\nw0\tw2\t2\nw0\tzebra\t3\nw1\tw4\t0.5\n")
    rep = evaluate_measure(t, None, MeasureConfig(d_max=5), "edge", ds)
    assert rep.n == 3 and rep.skipped[0][0] == ("w0", "zebra")


def test_distance_measures_are_converted():
    t = line_taxonomy()
    ic = {f"c{i}": float(i) for i in range(5)}
    cfg = MeasureConfig(conversion_c=100)
    scores = [v for v, _ in score_pairs(t, ic, cfg, "jc-simplified", line_dataset())]
    assert scores == [100 - k for k in range(5)]


# -- sweep -------------------------------------------------------------------------


def _sweep_fixture(seed=5):
    rng = seeded(seed)
    t = random_tree(rng, 12, words=True)
    ic = monotone_ic(rng, t)
    words = sorted(t.word_index)
    rows = "".join(f"{rng.choice(words)}\t{rng.choice(words)}\t{rng.uniform(0, 4):.3f}\n" for _ in range(15))
    return t, ic, ratings("word1\tword2\trating\n" + rows)


def test_sweep_single_cell():
    t, ic, ds = _sweep_fixture()
    res = parameter_sweep(t, ic, ds, alphas=[1.0], betas=[0.5])
    want = evaluate_measure(t, ic, MeasureConfig(alpha=1.0, beta=0.5), "jc", ds).r
    assert res.grid.shape == (1, 1) and res.grid[0, 0] == want
    assert res.best == (1.0, 0.5, want)


def test_sweep_grid_matches_brute_force():
    t, ic, ds = _sweep_fixture(9)
    alphas, betas = (0.0, 0.5, 1.0, 2.0), (1.0, 0.5, 0.2)
    res = parameter_sweep(t, ic, ds, alphas, betas)
    cells = []
    for a in alphas:
        for b in betas:
            cells.append((a, b, evaluate_measure(t, ic, MeasureConfig(alpha=a, beta=b), "jc", ds).r))
    np.testing.assert_array_equal(res.grid.ravel(), [c[2] for c in cells])
    top = max(c[2] for c in cells)
    assert res.best == next(c for c in cells if c[2] == top)


def test_sweep_ties_take_first_cell():
    t, ic, ds = _sweep_fixture()
    res = parameter_sweep(t, ic, ds, alphas=[0.0, 0.0], betas=[1.0])
    assert res.best[:2] == (0.0, 1.0) and res.grid[0, 0] == res.grid[1, 0]


def test_sweep_negative_alpha_warns():
    t, ic, ds = _sweep_fixture()
    with pytest.warns(UserWarning, match="negative"):
        parameter_sweep(t, ic, ds, alphas=[-1.0], betas=[1.0])


def test_sweep_empty():
    t, ic, ds = _sweep_fixture()
    with pytest.raises(EvaluationError):
        parameter_sweep(t, ic, ds, alphas=[], betas=[1.0])


def test_shipped_sweep_table_peaks_at_default(data):
    with open(data / "combined-sweep.tsv", encoding="utf-8") as fh:
        rows = list(csv.reader(fh, delimiter="\t"))
    betas = [float(b) for b in rows[0][1:]]
    cells = [(float(r[0]), b, float(v)) for r in rows[1:] for b, v in zip(betas, r[1:])]
    a, b, _ = max(cells, key=lambda c: c[2])
    cfg = MeasureConfig()
    assert (a, b) == (cfg.alpha, cfg.beta) == (0.5, 0.3)


# -- formatting --------------------------------------------------------------------


def test_format_reports(ratings_path):
    with open(ratings_path, encoding="utf-8") as fh:
        ds = load_ratings(fh)
    reps = [evaluate_column(ds, c) for c in ds.columns]
    tsv = format_reports(reps)
    lines = tsv.strip().split("\n")
    assert lines[0].split("\t") == ["dataset", "target", "n", "r", "skipped"]
    assert len(lines) == 5
    data = json.loads(format_reports(reps, "json"))
    assert [d["target"] for d in data] == list(ds.columns)


def test_format_sweep_json():
    t, ic, ds = _sweep_fixture()
    res = parameter_sweep(t, ic, ds, alphas=[0.0, 1.0], betas=[1.0, 0.3])
    d = json.loads(format_sweep(res, "json"))
    assert d["best"]["r"] == res.best[2]
    assert len(format_sweep(res).strip().split("\n")) >= 3
