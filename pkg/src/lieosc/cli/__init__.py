"""Command-line front end: ``lieosc {classical,evolve,params,sweep,verify}``."""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from ..errors import ConfigError, LieoscError
from .commands import COMMANDS, EXIT_CONFIG, EXIT_NUMERIC, Options, cmd_verify
from .config import ScenarioConfig

__all__ = ["ScenarioConfig", "build_parser", "main"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lieosc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "classical": "driven damped oscillator trajectories, spectra and response sweeps",
        "evolve": "full scenario: parameter flows plus reconstructed wavefunctions",
        "params": "parameter flows only (no grid)",
        "sweep": "run a grid of configs derived from the sweep section",
        "verify": "built-in self-checks, plus oracle checks for a given config",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--config", type=Path, required=name != "verify", metavar="PATH",
                       help="scenario JSON document")
        p.add_argument("--out", type=Path, metavar="DIR",
                       help="output directory (default: config 'output', else out/<name>)")
        p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes for sweeps")
        p.add_argument("--oracle", action="store_true",
                       help="also run the split-step solver and write the L2 error series")
        p.add_argument("--strict", action="store_true",
                       help="exit 3 on divergence events or failed checks")
        p.add_argument("--pgm", action="store_true", help="write density heatmaps as PGM")
    return parser


def _out_dir(args, cfg: ScenarioConfig | None) -> Path | None:
    if args.out is not None:
        return args.out
    if cfg is None:
        return None
    return Path(cfg.output) if cfg.output else Path("out") / cfg.name


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = ScenarioConfig.load(args.config) if args.config is not None else None
        opt = Options(_out_dir(args, cfg), args.jobs, args.oracle, args.strict, args.pgm)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            if args.command == "verify":
                return cmd_verify(cfg, opt)
            return COMMANDS[args.command](cfg, opt)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LieoscError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
