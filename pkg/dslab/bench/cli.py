# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

"""Command line entry point.

Subcommands: ``run``, ``aggregate``, ``render``, ``degradation`` and
``defaults``. Every config key is also a flag of ``run`` with the same
name, e.g. ``--N_selection 50``; flags win over ``--config`` files.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import __package__
from .aggregate import aggregate
from .render import KINDS, render
from .runner import run_degradation, run_experiment
from .. import __version__
from .._config import (
    ALGORITHMS, ENVIRONMENTS, KEYS, MP_ALGORITHMS, ExperimentConfig,
    format_defaults, parse_pairs
)
from ..exceptions import ConfigError, DslabError, RunError
from ..utils.seed import parse_seeds

_log = logging.getLogger(__package__)

# Short spellings of a few keys.
ALIASES = {
    "algorithm": ("--algo",),
    "environment": ("--env",),
    "output_dir": ("--out",),
}

EXIT_FAILURE = 1
EXIT_USAGE = 2


def _checkpoints(text: str) -> List[int]:
    return [int(s) for s in parse_seeds(text)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dslab", description="Divergent search experiments."
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    level = parser.add_mutually_exclusive_group()
    level.add_argument(
        "-v", "--verbose", action="store_true", help="log per generation"
    )
    level.add_argument(
        "-q", "--quiet", action="store_true", help="only log warnings"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run every seed of a config")
    run.add_argument(
        "--config", type=Path, help="`key = value` config file"
    )
    run.add_argument(
        "--seed-range", metavar="A..B", help="inclusive seed range"
    )
    run.add_argument(
        "--iters", type=int,
        help="iterations (planners) or generations (policy search)"
    )
    for key in KEYS:
        run.add_argument(
            f"--{key}", *ALIASES.get(key, ()), dest=key, metavar="VALUE"
        )

    agg = commands.add_parser("aggregate", help="summarise run directories")
    agg.add_argument("run_dirs", nargs="+", type=Path)
    agg.add_argument(
        "--checkpoints", type=_checkpoints, required=True,
        help="generations to summarise, e.g. 250,500 or 0..10"
    )
    agg.add_argument("--out", type=Path, default=Path("."))

    view = commands.add_parser("render", help="draw a run directory as SVG")
    view.add_argument("run_dir", type=Path)
    view.add_argument("kind", choices=KINDS)
    view.add_argument("--seed", type=int)
    view.add_argument("--out", type=Path)

    deg = commands.add_parser(
        "degradation", help="measure expansion degradation of archives"
    )
    deg.add_argument("run_dirs", nargs="+", type=Path)
    deg.add_argument("--out", type=Path, default=Path("degradation.csv"))
    deg.add_argument("--seed", type=int, default=0)
    deg.add_argument("--policies-per-cell", type=int, default=200)
    deg.add_argument("--expansions", type=int, default=100)

    defaults = commands.add_parser("defaults", help="print the defaults")
    defaults.add_argument("--algo", choices=ALGORITHMS)
    defaults.add_argument("--env", choices=ENVIRONMENTS)

    return parser


def config_pairs(args: argparse.Namespace) -> List[Tuple[str, str]]:
    """Config file pairs followed by the flag overrides."""
    pairs: List[Tuple[str, str]] = []

    if args.config is not None:
        try:
            pairs.extend(parse_pairs(args.config.read_text()))
        except OSError as e:
            raise ConfigError(f"Cannot read `{args.config}`: {e}") from e

    pairs.extend(
        (key, getattr(args, key)) for key in KEYS
        if getattr(args, key) is not None
    )

    if args.seed_range is not None:
        pairs.append(("seeds", args.seed_range))

    if args.iters is not None:
        algorithm = dict(pairs).get("algorithm", "").strip()
        key = "N_sel_exp" if algorithm in MP_ALGORITHMS else "N_generation"
        pairs.append((key, str(args.iters)))

    return pairs


def _run(args: argparse.Namespace):
    config = ExperimentConfig.from_pairs(config_pairs(args))
    print(run_experiment(config))


def _aggregate(args: argparse.Namespace):
    rows = aggregate(args.run_dirs, args.checkpoints, args.out)

    for row in rows:
        print(
            f"{row.algorithm:>4} {row.checkpoint:>6} "
            f"{row.mean:.4f} +- {row.std:.4f} ({row.n_runs} runs)"
        )


def _render(args: argparse.Namespace):
    print(render(args.run_dir, args.kind, args.out, args.seed))


def _degradation(args: argparse.Namespace):
    run_degradation(
        args.run_dirs, args.out, seed=args.seed,
        n_policies_per_cell=args.policies_per_cell,
        n_expansions_per_policy=args.expansions
    )
    print(args.out)


def _defaults(args: argparse.Namespace):
    for algorithm in [args.algo] if args.algo else ALGORITHMS:
        for environment in [args.env] if args.env else ENVIRONMENTS:
            if algorithm in MP_ALGORITHMS and environment != "simplemaze":
                continue

            print(f"# {algorithm} on {environment}")
            print(format_defaults(algorithm, environment))


COMMANDS = {
    "run": _run,
    "aggregate": _aggregate,
    "render": _render,
    "degradation": _degradation,
    "defaults": _defaults,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=(
            logging.DEBUG if args.verbose
            else logging.WARNING if args.quiet
            else logging.INFO
        ),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )

    try:
        COMMANDS[args.command](args)
    except ConfigError as e:
        key = f" ({e.key})" if e.key else ""
        _log.error("Invalid configuration%s: %s", key, e)
        return EXIT_USAGE
    except RunError as e:
        _log.error("Seed %s failed: %s", e.seed, e)
        return EXIT_FAILURE
    except DslabError as e:
        _log.error("%s", e)
        return EXIT_FAILURE

    return 0


if __name__ == "__main__":
    sys.exit(main())
