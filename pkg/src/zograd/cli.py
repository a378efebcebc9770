"""Command-line front end for the experiment harness.

Subcommands: run-gd, run-sgd, validate-lemma, sweep, complexity-table.
Option precedence is CLI flag > config file > built-in default, with the
ZOGRAD_SEED environment variable as the lowest-precedence seed source.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .harness import (
    LEMMA_NAMES,
    SWEEP_AXES,
    ExperimentConfig,
    run_experiment,
    summary_csv_row,
    sweep,
    validate_lemma,
)
from .theory import gd_alpha, gd_iterations, sgd_alpha, sgd_query_complexity, sgd_warmup

_CONFIG_SECTIONS = ("problem", "target", "overrides")


def load_config_file(path: str) -> dict:
    """Flatten a TOML config: top-level keys plus the known sections."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    flat = {k: v for k, v in data.items() if not isinstance(v, dict)}
    for section in _CONFIG_SECTIONS:
        flat.update(data.get(section, {}))
    return flat


def _seed_default() -> int:
    env = os.environ.get("ZOGRAD_SEED")
    return int(env) if env is not None else 0


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="TOML config file")
    p.add_argument("--seed", type=int, metavar="U64", help="master seed")
    p.add_argument("--trials", type=int, metavar="N")
    p.add_argument("--eps", type=float, metavar="F")
    p.add_argument("--delta", type=float, metavar="F")
    p.add_argument("--out", metavar="PATH", help="JSONL output path")
    p.add_argument("--csv", action="store_true", help="also emit a CSV summary row")
    p.add_argument("--parallelism", type=int, default=1, metavar="N")
    p.add_argument("--c-alpha", type=float, dest="c_alpha", metavar="F")
    p.add_argument("--c-T", type=float, dest="c_T", metavar="F")
    p.add_argument("--d", type=int, metavar="N", help="problem dimension")
    p.add_argument("--L", type=float, metavar="F", help="smoothness constant")
    p.add_argument("--mu", type=float, metavar="F", help="strong convexity constant")
    p.add_argument("--sigma", type=float, metavar="F", help="noise bound")
    p.add_argument("--T", type=int, metavar="N", help="iteration count override")
    p.add_argument("--alpha", type=float, metavar="F", help="smoothing override")


def build_config(args: argparse.Namespace, kind: str) -> ExperimentConfig:
    merged: dict = {"kind": kind, "master_seed": _seed_default()}
    if args.config:
        file_values = load_config_file(args.config)
        file_values.pop("kind", None)
        if "seed" in file_values:
            file_values["master_seed"] = file_values.pop("seed")
        merged.update(file_values)
    flag_map = {
        "seed": "master_seed",
        "trials": "trials",
        "eps": "eps",
        "delta": "delta",
        "out": "output_path",
        "c_alpha": "c_alpha",
        "c_T": "c_T",
        "d": "d",
        "L": "L",
        "mu": "mu",
        "sigma": "sigma",
        "T": "T",
        "alpha": "alpha",
    }
    for flag, field in flag_map.items():
        value = getattr(args, flag, None)
        if value is not None:
            merged[field] = value
    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = set(merged) - known
    if unknown:
        raise SystemExit(f"unknown config keys: {sorted(unknown)}")
    return ExperimentConfig(**merged)


def _emit_summary(summary, args) -> None:
    print(json.dumps(summary.to_record()))
    if args.csv:
        header, row = summary_csv_row(summary)
        if args.out:
            with open(args.out + ".csv", "w") as fh:
                fh.write(header + "\n" + row + "\n")
        else:
            print(header)
            print(row)


def _cmd_run(args: argparse.Namespace, kind: str) -> int:
    cfg = build_config(args, kind)
    summary = run_experiment(cfg, parallelism=args.parallelism)
    _emit_summary(summary, args)
    return 0


def _cmd_validate_lemma(args: argparse.Namespace) -> int:
    params = {}
    if args.config:
        params = load_config_file(args.config).get("lemma_params", {})
        if not params:
            params = {
                k: v
                for k, v in load_config_file(args.config).items()
                if k in ("d", "T", "K", "T0", "sigma", "delta", "trials", "N", "k_dof", "n_samples")
            }
    for key in ("trials", "delta"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    report = validate_lemma(args.name, params, master_seed=args.seed or _seed_default())
    record = {
        "lemma_id": report.lemma_id,
        "trials": report.trials,
        "violations": report.violations,
        "claimed_delta": report.claimed_delta,
        "empirical_rate": report.empirical_rate,
        "margin": report.margin,
    }
    print(json.dumps(record))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(json.dumps(record) + "\n")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = build_config(args, args.kind)
    values = [float(v) for v in args.values.split(",")]
    if args.axis in ("T", "d"):
        values = [int(v) for v in values]
    summaries, slope = sweep(
        cfg, args.axis, values, parallelism=args.parallelism, independent=args.independent
    )
    for summary in summaries:
        print(json.dumps(summary.to_record()))
    if slope is not None:
        print(json.dumps({"record": "sweep_slope", "axis": args.axis, "slope": slope}))
    if args.csv:
        rows = [summary_csv_row(s) for s in summaries]
        text = rows[0][0] + "\n" + "\n".join(r[1] for r in rows) + "\n"
        if args.out:
            with open(args.out + ".csv", "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return 0


def _cmd_complexity_table(args: argparse.Namespace) -> int:
    dims = [int(v) for v in args.dims.split(",")]
    eps = args.eps if args.eps is not None else 1e-3
    delta = args.delta if args.delta is not None else 0.05
    L = args.L if args.L is not None else 1.0
    mu = args.mu if args.mu is not None else 0.1
    Delta0 = args.Delta0
    print(f"{'d':>6} {'T_gd':>12} {'alpha_gd':>12} {'T_sgd':>12} {'alpha_sgd':>12}")
    for d in dims:
        T_gd = gd_iterations(d, L, mu, Delta0, eps, delta)
        a_gd = gd_alpha(d, L, mu, eps, delta, max(T_gd, 2))
        T_sgd = sgd_query_complexity(d, eps, delta)
        a_sgd = sgd_alpha(d, T_sgd, sgd_warmup(d, L, mu))
        print(f"{d:>6} {T_gd:>12} {a_gd:>12.4e} {T_sgd:>12} {a_sgd:>12.4e}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="zograd",
        description="Zeroth-order optimization experiments and concentration checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gd = sub.add_parser("run-gd", help="fixed-step method Monte Carlo run")
    _add_common_flags(p_gd)
    p_gd.set_defaults(func=lambda a: _cmd_run(a, "gd"))

    p_sgd = sub.add_parser("run-sgd", help="decaying-step stochastic method run")
    _add_common_flags(p_sgd)
    p_sgd.set_defaults(func=lambda a: _cmd_run(a, "sgd"))

    p_lemma = sub.add_parser("validate-lemma", help="run one concentration validator")
    p_lemma.add_argument("name", choices=LEMMA_NAMES)
    _add_common_flags(p_lemma)
    p_lemma.set_defaults(func=_cmd_validate_lemma)

    p_sweep = sub.add_parser("sweep", help="run experiments along one parameter axis")
    p_sweep.add_argument("--kind", choices=("gd", "sgd"), default="gd")
    p_sweep.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p_sweep.add_argument("--values", required=True, help="comma-separated ascending values")
    p_sweep.add_argument(
        "--independent",
        action="store_true",
        help="separate runs per T instead of checkpointing one long run",
    )
    _add_common_flags(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_table = sub.add_parser("complexity-table", help="print schedule formulas on a grid")
    p_table.add_argument("--dims", default="5,10,20,40", help="comma-separated dimensions")
    p_table.add_argument("--eps", type=float)
    p_table.add_argument("--delta", type=float)
    p_table.add_argument("--L", type=float)
    p_table.add_argument("--mu", type=float)
    p_table.add_argument("--Delta0", type=float, default=1.0)
    p_table.set_defaults(func=_cmd_complexity_table)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
