"""Command line: figgen --kind {fig3,fig4} --in PATH... --out PATH."""

from __future__ import annotations

import argparse
import sys

from .render import FigureSpec, render
from .schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="figgen",
        description="regenerate figures from published simulation artifacts")
    ap.add_argument("--kind", required=True, choices=("fig3", "fig4"))
    ap.add_argument("--in", dest="inputs", nargs="+", required=True,
                    help="input CSV and JSON files")
    ap.add_argument("--out", required=True, help="output image path")
    ap.add_argument("--xlabel")
    ap.add_argument("--ylabel")
    ap.add_argument("--no-fit", action="store_true",
                    help="suppress the fitted-line overlay")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(kind=args.kind, inputs=args.inputs, output=args.out,
                          xlabel=args.xlabel, ylabel=args.ylabel,
                          fit_overlay=not args.no_fit)
        report = render(spec)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {report['output']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
