"""Command line interface.

Exit codes: 0 on success, 2 for unreadable or invalid input files and
configurations, 3 for numerical/domain errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    SECTIONS,
    dominance_table,
    emit_plot_data,
    indices_table,
    proportions_table,
    run_analysis,
    write_draws,
    write_report,
)
from .errors import OrdineqError, ValidationError
from .io import load_config

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3

COMMANDS = {
    "estimate": ("posterior draws and proportion summaries", ("proportions",)),
    "indices": ("H, J and CF(alpha) posterior summaries", ("indices",)),
    "dominance": ("FSD, restricted FSD and GLD probabilities", ("dominance",)),
    "curves": ("GL curves and dominance probability curves", ("curves",)),
    "density": ("kernel density estimates of index posteriors", ("density",)),
    "report": ("everything, plus report.json and report.txt", SECTIONS),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordineq",
        description="Bayesian level, inequality and dominance analysis of ordinal categorical data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, type=Path, help="JSON analysis configuration")
    common.add_argument("--seed", type=int, help="override the configured seed")
    common.add_argument("--draws", type=int, help="override the configured number of posterior draws M")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--render", action="store_true", help="also write SVG line charts")
    common.add_argument("--workers", type=int, default=1, help="threads used for sampling (results do not depend on it)")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (help_text, _) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def _run(args) -> None:
    config = load_config(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if args.draws is not None:
        config.draws = args.draws
    config.validate()
    sections = COMMANDS[args.command][1]
    report = run_analysis(config, sections, workers=args.workers)
    out = args.out
    if out is None and args.command in ("curves", "density", "report"):
        out = Path("ordineq-out")

    if args.command == "estimate":
        print(proportions_table(report))
        if out is not None:
            for p in write_draws(report, out):
                logging.info("wrote %s", p)
    elif args.command == "indices":
        print(indices_table(report))
    elif args.command == "dominance":
        if not report.comparisons:
            print("no comparisons configured")
        else:
            print(dominance_table(report))
    elif args.command in ("curves", "density"):
        paths = emit_plot_data(report, out, render=args.render)
        for p in paths:
            print(p)
    else:
        emit_plot_data(report, out, render=args.render)
        write_report(report, out)
        print(report.to_text(), end="")
        print(f"\nwrote report.json, report.txt and {len(report.artifacts)} plot files to {out}")

    if out is not None and args.command in ("estimate", "indices", "dominance"):
        write_report(report, out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _run(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OrdineqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
