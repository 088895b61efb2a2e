"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
import time
import warnings
from pathlib import Path

from . import __version__
from .beamforming import validate_dof
from .channels import matrix_to_json
from .config import MANIFEST_SCHEMA, config_to_mapping, parse_config
from .errors import ConfigError, TrialError
from .report import write_sweep_csvs, write_sweep_figures
from .sim import ScenarioConfig, draw_trial, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3
CHANNELS_SCHEMA = "mmcoexist/channels/v1"

log = logging.getLogger("mmcoexist")


def _load(args) -> ScenarioConfig:
    config = parse_config(args.config) if args.config else ScenarioConfig()
    overrides = {}
    if getattr(args, "trials", None) is not None:
        overrides["trials_per_point"] = args.trials
    if getattr(args, "seed", None) is not None and args.command == "sweep":
        overrides["base_seed"] = args.seed
    if overrides:
        try:
            config = dataclasses.replace(config, **overrides)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
    return config


def cmd_sweep(config: ScenarioConfig, out_dir, workers: int = 1, plot: bool = False) -> int:
    out_dir = Path(out_dir)
    start = time.perf_counter()
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            sweep = run_sweep(config, workers=workers)
        paths = write_sweep_csvs(sweep, out_dir)
        if plot:
            paths.update(write_sweep_figures(sweep, out_dir))
        manifest = {
            "schema": MANIFEST_SCHEMA,
            "tool_version": __version__,
            "base_seed": config.base_seed,
            "config": config_to_mapping(config),
            "outputs": {k: p.name for k, p in paths.items()},
            "wall_clock_seconds": round(time.perf_counter() - start, 3),
        }
        (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    except TrialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for row in sweep.rates_table():
        log.info("SNR %6.1f dB: R_ij %.3f  R_ki %.3f  sum %.3f  baseline %.3f", *row)
    return EXIT_OK


def channel_dump(config: ScenarioConfig, seed: int) -> dict:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        d = draw_trial(config, seed)
    matrices = {name: matrix_to_json(d[key].entries, d[key].kind)
                for name, key in (("H_rr", "h_rr"), ("H_ij", "h_ij"), ("H_ki", "h_ki"),
                                  ("H_ir", "h_ir"), ("H_ri", "h_ri"))}
    beams = {name: matrix_to_json(d[key])
             for name, key in (("F_RF_i", "f_rf_i"), ("W_RF_j", "w_rf_j"),
                               ("F_RF_k", "f_rf_k"), ("W_RF_i", "w_rf_i"))}
    return {"schema": CHANNELS_SCHEMA, "seed": int(seed), "config": config_to_mapping(config),
            "matrices": matrices, "rf_beamformers": beams}


def cmd_dump_channels(config: ScenarioConfig, seed: int, out_path) -> int:
    payload = channel_dump(config, seed)
    try:
        Path(out_path).write_text(json.dumps(payload) + "\n")
    except OSError as exc:
        print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_validate(config: ScenarioConfig) -> int:
    issues = validate_dof(config)
    for w in issues:
        print(f"warning: {w}")
    print(f"config ok ({len(issues)} warning{'s' if len(issues) != 1 else ''})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mmcoexist", description="Radar/radio coexistence beamforming experiments.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML config file or run manifest")
    common.add_argument("--trials", type=int, metavar="N", help="override trials per SNR point")
    common.add_argument("-v", "--verbose", action="store_true")

    s = sub.add_parser("sweep", parents=[common], help="run the Monte Carlo sweep and write figure data")
    s.add_argument("--seed", type=int, metavar="N", help="override the base seed")
    s.add_argument("--out", metavar="DIR", default="out", help="output directory (default: out)")
    s.add_argument("--workers", type=int, default=1, metavar="N", help="parallel worker processes")
    s.add_argument("--plot", action="store_true", help="also render rates.png and sir_cdf.png")

    d = sub.add_parser("dump-channels", parents=[common], help="dump one trial's channels and RF beams as JSON")
    d.add_argument("--seed", type=int, default=0, metavar="N", help="trial seed (default: 0)")
    d.add_argument("--out", metavar="PATH", default="channels.json", help="output file")

    sub.add_parser("validate", parents=[common], help="check the config and RF-chain degrees of freedom")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = _load(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "sweep":
        return cmd_sweep(config, args.out, workers=args.workers, plot=args.plot)
    if args.command == "dump-channels":
        return cmd_dump_channels(config, args.seed, args.out)
    return cmd_validate(config)


if __name__ == "__main__":
    sys.exit(main())
