"""CLI: casph-figures render --fig N --in data.csv --out fig.png"""

from __future__ import annotations

import argparse
import sys

from .reader import SchemaError
from .render import FigureSpec, render


def _parse_range(text):
    lo, hi = (float(v) for v in text.split(","))
    return (lo, hi)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="casph-figures")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render a figure from a sweep CSV")
    p.add_argument("--fig", type=int, required=True, choices=(1, 2, 3))
    p.add_argument("--in", dest="csv_path", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--x-range", type=_parse_range, default=None)
    p.add_argument("--y-range", type=_parse_range, default=None)
    args = parser.parse_args(argv)

    try:
        path = render(FigureSpec(csv_path=args.csv_path, figure_id=args.fig,
                                 out_path=args.out, x_range=args.x_range,
                                 y_range=args.y_range))
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
