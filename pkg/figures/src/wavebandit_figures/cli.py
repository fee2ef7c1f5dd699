"""Command-line entry point for rendering the two figure types."""

from __future__ import annotations

import argparse
import sys

from wavebandit_figures.panels import render_panels
from wavebandit_figures.schema import FigureSchemaError
from wavebandit_figures.winmatrix import render_winmatrix


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavebandit-figures",
        description="Render figures from wavebandit analysis CSVs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_panels = sub.add_parser("panels", help="mean/CI panels per loss measure")
    p_panels.add_argument("--in", dest="csv", required=True, help="aggregate CSV path")
    p_panels.add_argument("--out", required=True, help="output image path")
    p_panels.add_argument("--n-total", type=int, default=1000,
                          help="population size used to derive wave counts (default: %(default)s)")

    p_win = sub.add_parser("winmatrix", help="win-matrix heatmaps per wave size")
    p_win.add_argument("--in", dest="csv", required=True, help="win-matrix CSV path")
    p_win.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "panels":
            render_panels(args.csv, args.out, n_total=args.n_total)
        else:
            render_winmatrix(args.csv, args.out)
    except FigureSchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
