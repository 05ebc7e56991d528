"""Command line: ``smdagg {run,bound,check,minimize}``.

Exit codes: 0 success, 1 I/O failure, 2 validation error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import data as data_mod
from .checks import run_checks
from .errors import NumericalError, SmdaggError
from .harness import (ExperimentConfig, _Setup, reports_to_csv, run_experiment,
                      theoretical_bound)
from .proxy import make_proxy

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    d = cfg.to_dict()
    for name in ("seed", "replicates", "algorithm", "schedule", "out", "workers"):
        val = getattr(args, name, None)
        if val is not None:
            d[name] = val
    return ExperimentConfig.from_dict(d)


def cmd_run(args) -> int:
    cfg = _load_config(args)
    reports = run_experiment(cfg)
    if cfg.out is None:
        sys.stdout.write(reports_to_csv(reports))
    else:
        print(f"wrote {len(reports)} rows to {cfg.out}")
    return EXIT_OK


def cmd_bound(args) -> int:
    ts = args.t or [10, 100, 1000]
    rows = []
    if args.config:
        setup = _Setup(_load_config(args))
        for t in ts:
            rows.append((t, setup.bound(t)))
    else:
        kind = {"anytime": "anytime-thm1", "fixed": "fixed-horizon"}[args.schedule or "anytime"]
        alpha = vbar = None
        if args.proxy != "entropy":
            p = make_proxy(args.proxy, args.lam, args.M)
            alpha, vbar = p.alpha, p.vmax
            if kind == "anytime-thm1":
                kind = "general-thm2"
        for t in ts:
            rows.append((t, theoretical_bound(kind, t, args.M, args.lam, args.L, alpha, vbar)))
    print("t,bound")
    for t, b in rows:
        print(f"{t},{format(b, '.17g')}")
    return EXIT_OK


def cmd_check(args) -> int:
    failed = 0
    for name, ok, detail in run_checks(args.seed or 0):
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}", flush=True)
    return EXIT_OK if failed == 0 else EXIT_NUMERICAL


def cmd_minimize(args) -> int:
    cfg = _load_config(args) if args.config else ExperimentConfig()
    if args.data:
        d = cfg.to_dict()
        d["distribution"] = {"type": "csv", "path": args.data, "kind": args.kind}
        if d["basis"] is None:
            dist = data_mod.load_dataset(args.data, kind=args.kind)
            dim = dist.xs.shape[1]
            d["basis"] = {"type": "stumps", "dim": dim,
                          "thresholds": [list(data_mod.STUMP_CUTS)] * dim}
        cfg = ExperimentConfig.from_dict(d)
    setup = _Setup(cfg)
    res = setup.optimum
    out = {"value": res.value, "gap": res.gap, "method": res.method,
           "theta": [float(v) for v in res.theta.values]}
    text = json.dumps(out, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smdagg", description="Mirror descent with averaging on the simplex.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True):
        sp.add_argument("--config", help="JSON file with ExperimentConfig fields")
        sp.add_argument("--seed", type=int)
        if out:
            sp.add_argument("--out", help="output path")

    r = sub.add_parser("run", help="run a replicated experiment and emit CSV")
    common(r)
    r.add_argument("--replicates", type=int)
    r.add_argument("--algorithm", choices=("smd", "eg", "sgd"))
    r.add_argument("--schedule", choices=("anytime", "fixed"))
    r.add_argument("--workers", type=int)
    r.set_defaults(fn=cmd_run)

    b = sub.add_parser("bound", help="print excess-risk bounds")
    common(b, out=False)
    b.add_argument("--t", type=int, action="append", help="horizon (repeatable)")
    b.add_argument("--M", type=int, default=16)
    b.add_argument("--lam", type=float, default=1.0)
    b.add_argument("--L", type=float, default=1.0)
    b.add_argument("--proxy", default="entropy", choices=("entropy", "power", "pnorm", "euclidean"))
    b.add_argument("--schedule", choices=("anytime", "fixed"))
    b.set_defaults(fn=cmd_bound)

    c = sub.add_parser("check", help="run the property and diagnostic checks")
    c.add_argument("--seed", type=int)
    c.set_defaults(fn=cmd_check)

    m = sub.add_parser("minimize", help="batch minimizer of the exact risk")
    common(m)
    m.add_argument("--data", help="CSV dataset (label first)")
    m.add_argument("--kind", default="classification", choices=("classification", "regression"))
    m.set_defaults(fn=cmd_minimize)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (SmdaggError, ValueError, KeyError, TypeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
