"""Command-line front end: ``python -m ra_cellfree <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, _parse_int_list, _parse_list, build_config, read_config_text
from .experiments import ExperimentConfig, empirical_cdf, run_monte_carlo
from .storage import write_cdf, write_csv, write_traces

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

# flag dest -> config key
FLAG_KEYS = {
    "aps": "num_aps", "users": "num_users", "trials": "trials", "seed": "master_seed",
    "schemes": "schemes", "power_dbm": "tx_power_dbm", "noise_dbm": "noise_dbm",
    "pathloss_exp": "pathloss_exp", "rician_k": "rician_k", "directivity": "directivity",
    "smoothness": "smoothness", "area": "area_side", "xi": "xi", "max_outer": "max_outer",
    "denom_mode": "denom_mode", "init": "init_mode", "out": "output_path",
    "workers": "workers", "values": "sweep_values",
}

# per-subcommand defaults that differ from the library defaults
SUBCOMMANDS = {
    "simulate": {},
    "sweep-aps": {"sweep": "aps", "num_users": 5, "sweep_values": (10, 20, 30, 40)},
    "sweep-users": {"sweep": "users", "num_aps": 30, "sweep_values": (5, 10, 15)},
    "convergence": {"sweep": "aps", "num_users": 5, "sweep_values": (20, 30, 40),
                    "schemes": ("optimized",)},
    "cdf": {"num_aps": 30, "num_users": 10},
}


def build_parser():
    parser = argparse.ArgumentParser(prog="ra_cellfree", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--aps", type=int)
        p.add_argument("--users", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--schemes", type=_parse_list, help="comma-separated subset")
        p.add_argument("--power-dbm", type=float)
        p.add_argument("--noise-dbm", type=float)
        p.add_argument("--pathloss-exp", type=float)
        p.add_argument("--rician-k", type=float)
        p.add_argument("--directivity", type=int)
        p.add_argument("--smoothness", type=float)
        p.add_argument("--area", type=float)
        p.add_argument("--xi", type=float)
        p.add_argument("--max-outer", type=int)
        p.add_argument("--denom-mode", choices=("as_printed", "per_interferer"))
        p.add_argument("--init", choices=("aligned", "random", "fixed"))
        p.add_argument("--out")
        p.add_argument("--workers", type=int)
        p.add_argument("--isotropic-hemisphere", action="store_true", default=None)
        if SUBCOMMANDS[name].get("sweep"):
            p.add_argument("--values", type=_parse_int_list,
                           help="comma-separated sweep points")
        if name == "cdf":
            p.add_argument("--grid-points", type=int, default=201)
    return parser


def config_from_args(args):
    overrides = {k: v for k, v in SUBCOMMANDS[args.command].items() if k != "sweep"}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            overrides.update(read_config_text(fh.read(), args.config))
    for dest, key in FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            overrides[key] = value
    if args.isotropic_hemisphere:
        overrides["isotropic_hemisphere"] = True
    base = ExperimentConfig(sweep=SUBCOMMANDS[args.command].get("sweep", "none"),
                            sweep_values=SUBCOMMANDS[args.command].get("sweep_values", ()))
    return build_config(overrides, base)


def _summary(result, config):
    lines = []
    for L, K in config.points():
        for scheme in config.schemes:
            rows = result.select(scheme, L, K)
            if rows:
                mean = np.mean([r.sum_rate for r in rows])
                lines.append(f"L={L:3d} K={K:3d} {scheme:10s} mean sum rate "
                             f"{mean:8.3f} bps/Hz  per user {mean / K:7.3f}")
    return "\n".join(lines)


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(config.output_path)
    try:
        result = run_monte_carlo(config)
        write_csv(result.records, out)
        written = [out, *write_traces(result.records, out)]
        if args.command == "cdf":
            curves = {}
            rates = {s: [x for r in result.select(s) for x in r.per_user_rate]
                     for s in config.schemes}
            top = max((max(v) for v in rates.values() if v), default=1.0)
            grid = np.linspace(0.0, top, args.grid_points)
            for scheme, samples in rates.items():
                if samples:
                    curves[scheme] = empirical_cdf(samples, grid)
            cdf_path = out.with_name(f"{out.stem}_cdf.csv")
            write_cdf(curves, cdf_path)
            written.append(cdf_path)
    except Exception as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    print(_summary(result, config))
    for path in written:
        print(f"wrote {path}")
    if result.failures:
        print(f"{len(result.failures)} trial(s) failed; partial output kept", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
