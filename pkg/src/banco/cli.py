"""Command-line front end.

    banco run --config exp.cfg --out results.csv [--seed N]
    banco sweep --config exp.cfg --out prefix [--comparators 1,10] [--sigma2 0,1,4]
    banco concentration --paths 1000 --T 1000 --delta 0.05 [--d 10] --out cov.csv

Exit codes: 0 on success, 2 on configuration errors, 3 on I/O errors, each
with a one-line diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import replace

import numpy as np

from .concentration import banach_coverage, doob_coverage, lil_boundary
from .direction import NormSpec
from .errors import ConfigError
from .harness import parse_config, run_experiment, spec_from_mapping, write_csv
from .noise import make_oracle, substream


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="banco", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment config and write CSV")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--workers", type=int, default=None)

    p_sweep = sub.add_parser("sweep", help="grid over comparators and noise levels")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True, help="output path prefix")
    p_sweep.add_argument("--comparators", default=None, help="comma list overriding the config")
    p_sweep.add_argument("--sigma2", default=None, help="comma list of gaussian variances")
    p_sweep.add_argument("--seed", type=int, default=None)

    p_conc = sub.add_parser("concentration", help="anytime coverage simulations")
    p_conc.add_argument("--paths", type=int, default=1000)
    p_conc.add_argument("--T", type=int, default=1000)
    p_conc.add_argument("--delta", type=float, default=0.05)
    p_conc.add_argument("--noise-s2", type=float, default=1.0)
    p_conc.add_argument("--d", type=int, default=1)
    p_conc.add_argument("--seed", type=int, default=0)
    p_conc.add_argument("--out", required=True)
    return parser


def _load_spec(path: str, seed_override: int | None):
    with open(path) as fh:
        cfg = parse_config(fh.read())
    if seed_override is not None:
        cfg["seed"] = seed_override
    return spec_from_mapping(cfg)


def _cmd_run(args) -> int:
    spec = _load_spec(args.config, args.seed)
    records = run_experiment(spec, workers=args.workers)
    write_csv(args.out, spec, records)
    print(f"wrote {len(records)} rows to {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    spec = _load_spec(args.config, args.seed)
    if args.comparators:
        spec = replace(spec, comparators=tuple(float(v) for v in args.comparators.split(",")))
    sigmas = [float(v) for v in args.sigma2.split(",")] if args.sigma2 else [None]
    for s2 in sigmas:
        cell = spec
        suffix = ""
        if s2 is not None:
            params = dict(spec.params)
            params["noise_s2"] = s2
            noise = "none" if s2 == 0.0 else "gaussian"
            cell = replace(spec, params=params, noise=noise)
            suffix = f"_s2={s2:g}"
        records = run_experiment(cell)
        out = f"{args.out}{suffix}.csv"
        write_csv(out, cell, records)
        print(f"wrote {len(records)} rows to {out}")
    return 0


def _cmd_concentration(args) -> int:
    rows = []
    if args.d == 1:
        oracle = make_oracle("gaussian", 1, substream(args.seed, 0), s2=args.noise_s2)
        rate = doob_coverage(args.paths, args.T, args.delta, oracle)
        rows.append(("doob", rate))
        oracle = make_oracle("gaussian", 1, substream(args.seed, 1), s2=args.noise_s2)
        radii = lil_boundary(np.arange(1, args.T + 1), args.delta, math.sqrt(args.noise_s2))
        rate = doob_coverage(args.paths, args.T, args.delta, oracle, radii=radii)
        rows.append(("boundary", rate))
    else:
        oracle = make_oracle("gaussian", args.d, substream(args.seed, 2), s2=args.noise_s2)
        rate = banach_coverage(args.paths, args.T, args.delta, oracle, NormSpec.from_p(2.0))
        rows.append(("banach", rate))
    se = math.sqrt(args.delta * (1.0 - args.delta) / args.paths)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["kind", "paths", "T", "delta", "rate", "se"])
        for kind, rate in rows:
            writer.writerow([kind, args.paths, args.T, args.delta, repr(rate), repr(se)])
    print(f"wrote {len(rows)} coverage rows to {args.out}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_concentration(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
