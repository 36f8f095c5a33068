"""Command-line entry point: ``grapheff <subcommand>``.

Exit codes: 0 success, 2 usage or specification error, 3 data error,
4 internal invariant failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dataio import (DataError, DatasetManifest, read_results, read_tu, write_results,
                     write_tu)
from .graph import PROPERTY_NAMES
from .harness import FoldError, measure_gaps
from .metrics import MetricError, format_table, property_label_correlations, report_from_records
from .models import DEFAULT_ROSTER, RosterError, build_roster
from .regression import RegressionError, regress_effectiveness, subset_samples
from .sampler import SpecError, validate_spec
from .synth import (CONTROLLED_PROPERTY, KINDS, GeneratorConfig, InfeasibleTarget,
                    build_synthetic_dataset, dataset_spec,
                    verify_realized_correlation)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 2, 3, 4
DEFAULT_SEED = 0
OUTPUT_ENV = "GRAPHEFF_OUTPUT_DIR"

log = logging.getLogger("grapheff")


class UsageError(Exception):
    pass


def parse_r_list(text: str) -> list[float]:
    """``"0.1:0.9:0.1"`` (inclusive range) or ``"0.1,0.5,0.9"``."""
    try:
        if ":" in text:
            lo, hi, step = (float(t) for t in text.split(":"))
            if step <= 0:
                raise UsageError(f"r-list step must be > 0: {text!r}")
            count = int(np.floor((hi - lo) / step + 1e-9)) + 1
            values = [round(lo + i * step, 10) for i in range(count)]
        else:
            values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot parse r-list {text!r}") from None
    if not values:
        raise UsageError("empty r-list")
    return values


def _emit(args, payload, table: str):
    if _want_json(args):
        print(json.dumps(payload, indent=2))
    else:
        print(table)


def _want_json(args):
    if args.json:
        return True
    if args.table:
        return False
    return not sys.stdout.isatty()


def _fmt(v, nd=4):
    return "undefined" if v is None else f"{v:.{nd}f}"


def _align(rows):
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(str(c).ljust(w) if i == 0 else str(c).rjust(w)
                       for i, (c, w) in enumerate(zip(r, widths))) for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _out_dir(args):
    if args.out:
        return Path(args.out)
    env = os.environ.get(OUTPUT_ENV)
    if env:
        return Path(env)
    raise UsageError(f"--out not given and {OUTPUT_ENV} not set")


# -- subcommands ----------------------------------------------------------------

def cmd_generate(args):
    rs = parse_r_list(args.r_list)
    cfg = GeneratorConfig(seed=args.seed)
    if args.config:
        d = json.loads(Path(args.config).read_text(encoding="utf-8"))
        d["seed"] = args.seed
        cfg = GeneratorConfig.from_dict(d)
    for r in rs:
        validate_spec(dataset_spec(args.kind, r, args.n, args.classes, cfg))
    out = _out_dir(args)
    rows = [("dataset", "target_r", "realized_r", "attenuation", "misses")]
    payload = []
    plot = ["r realized_r"]
    for r in rs:
        ds = build_synthetic_dataset(args.kind, r, args.n, args.classes, cfg, jobs=args.jobs)
        prop = CONTROLLED_PROPERTY[args.kind]
        rc = verify_realized_correlation(ds, prop)
        man = DatasetManifest(
            name=ds.name, graph_count=len(ds), class_count=args.classes, source="synthetic",
            generation_spec={"kind": args.kind, "r": r, "seed": args.seed,
                             "correlation_spec": ds.spec.to_dict(),
                             "generator_config": cfg.to_dict(), "misses": ds.misses,
                             "realized_r": rc.realized_r},
            label_values=list(range(args.classes)))
        write_tu(ds.graphs, ds.labels, out / ds.name / ds.name, man)
        rows.append((ds.name, f"{r:.2f}", _fmt(rc.realized_r), _fmt(rc.attenuation, 3),
                     str(ds.misses)))
        payload.append({"dataset": ds.name, "path": str(out / ds.name), "target_r": r,
                        "property": prop, "realized_r": rc.realized_r,
                        "attenuation": rc.attenuation, "misses": ds.misses})
        plot.append(f"{r} {_fmt(rc.realized_r, 6)}")
    if args.plot_data:
        print("\n".join(plot))
    else:
        _emit(args, {"seed": args.seed, "datasets": payload}, _align(rows))


def _load_dataset(path):
    return read_tu(path)


def cmd_corr(args):
    ds = _load_dataset(args.dataset)
    labels = ds.labels
    if args.shuffle_labels:
        labels = np.random.default_rng(args.seed).permutation(labels)
    corr = property_label_correlations(ds.graphs, labels)
    rows = [("property", "pearson")] + [(p, _fmt(corr[p])) for p in PROPERTY_NAMES]
    if args.plot_data:
        print("property pearson")
        print("\n".join(f"{p} {_fmt(corr[p], 6)}" for p in PROPERTY_NAMES))
        return
    _emit(args, {"dataset": ds.manifest.name, "graph_count": ds.manifest.graph_count,
                 "class_count": ds.manifest.class_count, "correlations": corr,
                 "undefined": [p for p in PROPERTY_NAMES if corr[p] is None]},
          f"{ds.manifest.name}: {ds.manifest.graph_count} graphs, "
          f"{ds.manifest.class_count} classes\n" + _align(rows))


def cmd_effectiveness(args):
    records = read_results(args.results, percent=args.percent)
    metric = {"accuracy": "accuracy", "auc": "auc_roc", "auc_roc": "auc_roc"}[args.metric]
    records = [r for r in records if r.metric == metric]
    if not records:
        raise UsageError(f"no {metric} records in {args.results}")
    reports = report_from_records(records, args.classes)
    if args.plot_data:
        print("dataset E_A E_S E")
        for rep in reports:
            a = rep.per_type.get("A")
            print(f"{rep.dataset} {'NA' if a is None else f'{a.contribution:.6f}'} "
                  f"{rep.contribution('S'):.6f} {rep.total_effectiveness:.6f}")
        return
    _emit(args, {"metric": metric, "reports": [r.to_dict() for r in reports]},
          format_table(reports))


def _roster(args):
    if args.roster:
        doc = json.loads(Path(args.roster).read_text(encoding="utf-8"))
        entries = doc["models"] if isinstance(doc, dict) else doc
    else:
        entries = [m.strip() for m in args.models.split(",") if m.strip()]
    if args.grid:
        grids = json.loads(Path(args.grid).read_text(encoding="utf-8"))
        entries = [dict(e if isinstance(e, dict) else {"model": e}) for e in entries]
        for e in entries:
            if e["model"] in grids:
                e["grid"] = grids[e["model"]]
    return build_roster(entries)


def cmd_evaluate(args):
    roster = _roster(args)
    metric = "auc_roc" if args.metric in ("auc", "auc_roc") else "accuracy"
    all_records, summaries, plot = [], [], ["r baseline graph gap"]
    for path in args.datasets:
        ds = _load_dataset(path)
        m = measure_gaps(ds.graphs, ds.labels, roster, k=args.k, seed=args.seed,
                         dataset=ds.manifest.name, metric=metric,
                         class_count=ds.manifest.class_count, jobs=args.jobs)
        all_records.extend(m.records)
        gs = m.gap("S")
        summaries.append({"dataset": ds.manifest.name,
                          "records": [vars(r) for r in m.records],
                          "report": m.report.to_dict()})
        r = (ds.manifest.generation_spec or {}).get("r", "NA")
        plot.append(f"{r} {gs.baseline.mean:.6f} {gs.graph_method.mean:.6f} {gs.delta:.6f}")
    if args.out:
        write_results(all_records, args.out)
    if args.plot_data:
        print("\n".join(plot))
        return
    rows = [("dataset", "method", "role", "mean", "std")]
    for s in summaries:
        for rec in s["records"]:
            rows.append((s["dataset"], rec["method"], rec["role"], f"{rec['mean']:.4f}",
                         f"{rec['std']:.4f}"))
    table = _align(rows) + "\n\n" + "\n".join(
        f"{s['dataset']}: E = {s['report']['total_effectiveness']:.4f}" for s in summaries)
    _emit(args, {"seed": args.seed, "k": args.k, "metric": metric, "datasets": summaries},
          table)


def cmd_regress(args):
    root = Path(args.datasets)
    dirs = sorted(p for p in root.iterdir() if p.is_dir())
    if not dirs:
        raise DataError(f"no dataset directories in {root}")
    samples = []
    for d in dirs:
        ds = read_tu(d)
        samples += subset_samples(ds.manifest.name, ds.graphs, ds.labels,
                                  parts=args.parts, seed=args.seed, k=args.k,
                                  jobs=args.jobs)
    run = regress_effectiveness(samples, repeats=args.repeats, alpha=args.alpha,
                                seed=args.seed, n_perm=args.permutations)
    summary = run.summary()
    summary["seed"] = args.seed
    if args.out_csv:
        Path(args.out_csv).write_text(run.to_csv(), encoding="utf-8")
    if args.out_json:
        Path(args.out_json).write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    table = _align([("regressor", "pearson", "p-value", "spearman"),
                    (summary["regressor"],
                     f"{summary['pearson_mean']:.3f} ± {summary['pearson_std']:.3f}",
                     f"{summary['p_value_max']:.2g}",
                     f"{summary['spearman_mean']:.3f} ± {summary['spearman_std']:.3f}")])
    _emit(args, summary, table)


# -- parser -----------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker processes; results do not depend on it")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="force JSON output")
    fmt.add_argument("--table", action="store_true", help="force table output")
    common.add_argument("--plot-data", action="store_true",
                        help="emit whitespace-separated columns for plotting")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="grapheff", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="build Syn-Degree / Syn-CC sweeps")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--r-list", default="0.1:0.9:0.1")
    g.add_argument("--n", type=int, default=4096)
    g.add_argument("--classes", type=int, default=2)
    g.add_argument("--config", help="GeneratorConfig JSON document")
    g.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV})")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("corr", parents=[common], help="property-label correlations")
    c.add_argument("dataset", help="TU dataset directory or dir/<DS> prefix")
    c.add_argument("--shuffle-labels", action="store_true")
    c.set_defaults(func=cmd_corr)

    e = sub.add_parser("effectiveness", parents=[common], help="effectiveness from results")
    e.add_argument("--results", required=True)
    e.add_argument("--classes", type=int, required=True)
    e.add_argument("--metric", choices=("accuracy", "auc", "auc_roc"), default="accuracy")
    e.add_argument("--percent", action="store_true", help="scores are on a 0-100 scale")
    e.set_defaults(func=cmd_effectiveness)

    v = sub.add_parser("evaluate", parents=[common], help="measure gaps on datasets")
    v.add_argument("datasets", nargs="+")
    v.add_argument("--models", default=",".join(DEFAULT_ROSTER))
    v.add_argument("--roster", help="roster JSON document")
    v.add_argument("--grid", help="per-model hyperparameter grid JSON")
    v.add_argument("--k", type=int, default=10)
    v.add_argument("--metric", choices=("accuracy", "auc", "auc_roc"), default="accuracy")
    v.add_argument("--out", help="write ResultRecords JSON here")
    v.set_defaults(func=cmd_evaluate)

    r = sub.add_parser("regress", parents=[common], help="predict effectiveness from features")
    r.add_argument("--datasets", required=True, help="directory of TU dataset directories")
    r.add_argument("--parts", type=int, default=10)
    r.add_argument("--k", type=int, default=10)
    r.add_argument("--repeats", type=int, default=10)
    r.add_argument("--alpha", type=float, default=1.0)
    r.add_argument("--permutations", type=int, default=10_000)
    r.add_argument("--out-csv")
    r.add_argument("--out-json")
    r.set_defaults(func=cmd_regress)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    print(f"seed: {args.seed}", file=sys.stderr)
    try:
        args.func(args)
    except (UsageError, SpecError, RosterError, InfeasibleTarget, MetricError,
            FoldError, RegressionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # invariant violations and bugs
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
