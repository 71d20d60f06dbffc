"""Command-line entry point: z2dfl-plot."""

from __future__ import annotations

import argparse
import sys

from .io import ParseError
from .render import KINDS, PlotJob, render

EXIT_OK = 0
EXIT_ERROR = 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="z2dfl-plot",
        description="Render figures from z2dfl output tables",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("plot", help="render one figure")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--in", dest="inputs", nargs="+", required=True,
                   metavar="FILE", help="input data file(s)")
    p.add_argument("--out", required=True, help="output image (PNG)")
    p.add_argument("--top-k", type=int, default=2,
                   help="peaks to annotate in diagonal profiles (default 2)")
    p.add_argument("--title", default="")
    p.add_argument("--dpi", type=int, default=150)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = PlotJob(
            kind=args.kind,
            inputs=tuple(args.inputs),
            output=args.out,
            top_k=args.top_k,
            title=args.title,
            dpi=args.dpi,
        )
        out = render(job)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(f"wrote {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
