"""Command-line front end: run experiment sweeps, emit figure data, check configs.

Exit status: 0 when every non-vacuous check passed and no errors occurred,
1 when some check failed, 2 for configuration problems.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .errors import ConfigError, FTSampleError
from .experiments import FORMATS, load_config, run, emit_figure_data


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftsample",
        description="Fourier sampling over approximate domains: bound sweeps and pipelines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a configured experiment")
    p_run.add_argument("--config", required=True, help="TOML experiment config")
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.add_argument("--out", default=None, help="override the output directory")
    p_run.add_argument("--format", choices=FORMATS, default=None, help="override the results format")
    p_run.add_argument("--jobs", type=int, default=None, help="worker processes (env FTSAMPLE_JOBS as fallback)")

    p_fig = sub.add_parser("figure", help="emit plot-ready data files")
    p_fig.add_argument("--kind", required=True, help="figure kind (delta-response)")
    p_fig.add_argument("--p", type=int, required=True, help="source domain size")
    p_fig.add_argument("--q", type=int, required=True, help="target domain size, must exceed 2p")
    p_fig.add_argument("--j", type=int, required=True, help="source index of the point mass")
    p_fig.add_argument("--out", default=None, help="output file (default <kind>.csv)")

    p_val = sub.add_parser("validate", help="parse and range-check a config")
    p_val.add_argument("--config", required=True, help="TOML experiment config")
    return parser


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["out_path"] = args.out
    if args.format is not None:
        overrides["fmt"] = args.format
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    manifest = run(cfg, jobs=args.jobs)
    t = manifest.to_json_dict()["tallies"]
    print(f"{cfg.kind}: {t['total']} checks, {t['passed']} passed, {t['failed']} failed, {t['vacuous']} vacuous")
    print(f"results: {cfg.out_path}/results.{cfg.fmt}")
    print(f"manifest: {cfg.out_path}/manifest.json")
    return 0 if manifest.failed == 0 else 1


def _cmd_figure(args) -> int:
    if args.q <= 2 * args.p:
        raise ConfigError([("figure.q", f"need q > 2p, got q={args.q}, p={args.p}")])
    out = args.out if args.out is not None else f"{args.kind}.csv"
    path = emit_figure_data(args.kind, args.j, args.p, args.q, out)
    print(f"figure data: {path}")
    return 0


def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    print(f"valid: kind={cfg.kind} p={list(cfg.p_values)} q_multiplier={list(cfg.q_multipliers)} "
          f"trials={cfg.trials} seed={cfg.seed} format={cfg.fmt}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "figure":
            return _cmd_figure(args)
        return _cmd_validate(args)
    except ConfigError as e:
        for path, message in e.errors:
            where = path if path else "config"
            print(f"config error: {where}: {message}", file=sys.stderr)
        return 2
    except FTSampleError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
