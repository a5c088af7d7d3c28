"""Command-line front end: ``taxosim {sim,ic,eval,sweep,info}``.

Exit codes: 0 success, 1 bad input or data, 2 internal invariant violation.
Relative input paths that do not exist are looked up in ``$TAXOSIM_DATA_DIR``
and then in the bundled data directory.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from taxosim import kernels
from taxosim.corpus import ESTIMATORS, SCHEMES, estimate_ic, format_ic_table, load_frequencies, load_ic
from taxosim.errors import TaxosimError
from taxosim.evaluation import (
    SWEEP_ALPHAS,
    SWEEP_BETAS,
    ablate_pair,
    evaluate_column,
    evaluate_measure,
    format_reports,
    format_sweep,
    load_ratings,
    parameter_sweep,
)
from taxosim.measures import IC_MEASURES, MEASURES, MeasureConfig, concept_measure, word_similarity
from taxosim.taxonomy import load_taxonomy


class UsageError(TaxosimError):
    pass


def data_dir():
    return Path(str(resources.files("taxosim") / "data"))


def resolve_path(path):
    p = Path(path)
    if p.exists() or p.is_absolute():
        return p
    env = os.environ.get("TAXOSIM_DATA_DIR")
    for base in ([Path(env)] if env else []) + [data_dir()]:
        if (base / p).exists():
            return base / p
    return p


def _rel_values(items, flag):
    out = {}
    for item in items or []:
        rel, sep, val = item.partition("=")
        if not sep or not rel:
            raise UsageError(f"{flag} expects rel=value, got {item!r}")
        try:
            out[rel] = float(val)
        except ValueError:
            raise UsageError(f"{flag}: {val!r} is not a number") from None
    return out


def _floats(text, flag):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{flag} expects a comma-separated list of numbers") from None


def build_config(args):
    return MeasureConfig(
        alpha=args.alpha,
        beta=args.beta,
        type_factors=_rel_values(args.type_factor, "--type-factor"),
        sussna_min=_rel_values(args.sussna_min, "--sussna-min"),
        sussna_max=_rel_values(args.sussna_max, "--sussna-max"),
        conversion_c=args.conversion_c,
        d_max=args.d_max,
        log_base=args.log_base,
        lsuper=args.lsuper,
    )


def load_inputs(args, need_ic):
    if not args.taxonomy:
        raise UsageError("--taxonomy is required")
    relations = tuple(r for r in args.relations.split(",") if r)
    t = load_taxonomy(resolve_path(args.taxonomy), relations=relations,
                      virtual_root=not args.no_virtual_root)
    ic = None
    if need_ic:
        if bool(args.freq) == bool(args.ic_path):
            raise UsageError("give exactly one of --freq or --ic-path for this measure")
        if args.ic_path:
            with open(resolve_path(args.ic_path), encoding="utf-8") as fh:
                ic = load_ic(fh, t, args.log_base)
        else:
            ic = _ic_from_freq(args, t)
    return t, ic


def _ic_from_freq(args, t):
    kind = "sense" if args.freq_kind == "sense" else "word"
    with open(resolve_path(args.freq), encoding="utf-8") as fh:
        f = load_frequencies(fh, kind)
    return estimate_ic(t, f, args.freq_kind, args.estimator, args.log_base)


# -- commands --------------------------------------------------------------


def cmd_sim(args, out):
    t, ic = load_inputs(args, args.measure in IC_MEASURES)
    cfg = build_config(args)
    res = word_similarity(t, concept_measure(args.measure, t, ic, cfg), args.word1, args.word2)
    s1, s2 = res.senses
    if args.format == "json":
        out.write(json.dumps({
            "measure": args.measure, "word1": args.word1, "word2": args.word2,
            "kind": res.kind, "value": res.value, "sense1": s1, "sense2": s2,
            "subsumer": res.subsumer, "path_len": res.path_len,
        }, sort_keys=True) + "\n")
    else:
        out.write("measure\tword1\tword2\tkind\tvalue\tsense1\tsense2\tsubsumer\n")
        out.write(f"{args.measure}\t{args.word1}\t{args.word2}\t{res.kind}\t{res.value:.6f}"
                  f"\t{s1}\t{s2}\t{res.subsumer or '-'}\n")


def cmd_ic(args, out):
    t, _ = load_inputs(args, need_ic=False)
    if args.ic_path:
        with open(resolve_path(args.ic_path), encoding="utf-8") as fh:
            table = load_ic(fh, t, args.log_base)
    elif args.freq:
        table = _ic_from_freq(args, t)
    else:
        raise UsageError("ic needs --freq (or --ic-path to re-emit a table)")
    if args.format == "json":
        out.write(json.dumps(
            {c: {"prob": table.prob.get(c), "ic": table.ic[c]} for c in sorted(table.ic)},
            sort_keys=True, indent=2) + "\n")
    else:
        out.write(format_ic_table(table))


def _ablated(ds, pair):
    if not pair:
        return ds
    parts = pair.split(",")
    if len(parts) != 2:
        raise UsageError("--ablate expects word1,word2")
    return ablate_pair(ds, *parts)


def cmd_eval(args, out):
    with open(resolve_path(args.ratings), encoding="utf-8") as fh:
        ds = load_ratings(fh, name=Path(args.ratings).stem)
    ds = _ablated(ds, args.ablate)
    if args.mode == "columns":
        reports = [evaluate_column(ds, c) for c in ds.columns]
    else:
        t, ic = load_inputs(args, args.measure in IC_MEASURES)
        reports = [evaluate_measure(t, ic, build_config(args), args.measure, ds)]
    out.write(format_reports(reports, args.format))


def cmd_sweep(args, out):
    with open(resolve_path(args.ratings), encoding="utf-8") as fh:
        ds = load_ratings(fh, name=Path(args.ratings).stem)
    ds = _ablated(ds, args.ablate)
    t, ic = load_inputs(args, need_ic=True)
    alphas = _floats(args.alphas, "--alphas") if args.alphas else SWEEP_ALPHAS
    betas = _floats(args.betas, "--betas") if args.betas else SWEEP_BETAS
    result = parameter_sweep(t, ic, ds, alphas, betas, build_config(args))
    out.write(format_sweep(result, args.format))


def cmd_info(args, out):
    t, _ = load_inputs(args, need_ic=False)
    hierarchy = sum(1 for e in t.edges if e.relation in t.relations)
    rows = [
        ("concepts", len(t)),
        ("edges", sum(1 for e in t.edges if not e.is_virtual)),
        ("hierarchy_edges", hierarchy),
        ("words", len(t.word_index)),
        ("roots", ",".join(sorted(t.roots))),
        ("virtual_root", t.virtual_root or "-"),
        ("max_depth", t.max_depth()),
        ("average_density", f"{t.average_density():.6f}"),
        ("kernel_backend", kernels.BACKEND),
    ]
    if args.format == "json":
        out.write(json.dumps(dict(rows), sort_keys=True) + "\n")
    else:
        out.writelines(f"{k}\t{v}\n" for k, v in rows)


# -- argument parsing ------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("inputs")
    g.add_argument("--taxonomy", help="taxonomy file")
    g.add_argument("--relations", default="isa",
                   help="comma-separated relations forming the hierarchy (default: isa)")
    g.add_argument("--no-virtual-root", action="store_true",
                   help="do not join multiple roots under a synthetic top node")
    g.add_argument("--freq", help="frequency file")
    g.add_argument("--freq-kind", choices=SCHEMES, default="sense")
    g.add_argument("--estimator", choices=ESTIMATORS, default="mle")
    g.add_argument("--ic-path", help="precomputed IC table (output of 'ic')")
    m = common.add_argument_group("measure")
    m.add_argument("--measure", choices=MEASURES, default="jc")
    m.add_argument("--alpha", type=float, default=0.5)
    m.add_argument("--beta", type=float, default=0.3)
    m.add_argument("--type-factor", action="append", metavar="REL=VAL")
    m.add_argument("--sussna-min", action="append", metavar="REL=VAL")
    m.add_argument("--sussna-max", action="append", metavar="REL=VAL")
    m.add_argument("--d-max", type=int)
    m.add_argument("--conversion-c", type=float)
    m.add_argument("--log-base", type=float, default=2.0)
    m.add_argument("--lsuper", choices=("ic", "depth"), default="ic")
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")

    parser = argparse.ArgumentParser(prog="taxosim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sim", parents=[common], help="similarity of two words")
    p.add_argument("word1")
    p.add_argument("word2")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("ic", parents=[common], help="print concept probabilities and IC")
    p.set_defaults(func=cmd_ic)

    p = sub.add_parser("eval", parents=[common], help="correlate with human ratings")
    p.add_argument("ratings")
    p.add_argument("--mode", choices=("columns", "measure"), default="columns")
    p.add_argument("--ablate", metavar="W1,W2")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", parents=[common], help="alpha/beta grid for the combined measure")
    p.add_argument("ratings")
    p.add_argument("--alphas", help="comma-separated (default: 2,1,0.5,0,-1,-2)")
    p.add_argument("--betas", help="comma-separated (default: 1,0.5,0.3,0.2)")
    p.add_argument("--ablate", metavar="W1,W2")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("info", parents=[common], help="taxonomy statistics")
    p.set_defaults(func=cmd_info)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except (TaxosimError, OSError, ValueError) as exc:
        print(f"taxosim: error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"taxosim: internal error: {exc}", file=sys.stderr)
        return 2
    return 0


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
