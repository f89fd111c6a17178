"""Command line: render_figure --run <dir> --figure fig2|fig3|fig4 --out <path>."""

import argparse
import sys
from pathlib import Path

from .data import MissingDataError
from .figures import FIGURE_IDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render_figure",
        description="regenerate a figure from an exported run directory",
    )
    parser.add_argument("--run", required=True, help="run directory with exported files")
    parser.add_argument("--figure", required=True, choices=FIGURE_IDS)
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(Path(args.run), args.figure, Path(args.out), dpi=args.dpi)
        out = render(spec)
    except (MissingDataError, ValueError) as exc:
        print(f"render_figure: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
