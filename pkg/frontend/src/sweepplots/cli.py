"""render --in sweep.csv [--in sweep2.csv] --out DIR"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .render import render
from .table import TableError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render latency-sweep CSVs into PNG and SVG figures.",
    )
    parser.add_argument(
        "--in",
        dest="inputs",
        metavar="CSV",
        action="append",
        required=True,
        help="sweep CSV; pass twice to add an upload comparison figure",
    )
    parser.add_argument("--out", metavar="DIR", required=True)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        written = render(args.inputs, args.out)
    except TableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(f"wrote {path}")
    return 0


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
