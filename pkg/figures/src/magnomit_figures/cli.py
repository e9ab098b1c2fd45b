"""Render panels from declarative spec files.

Usage: ``magnomit-figures spec.json [more-specs.json ...]``.  Each spec
names the CSVs, the panel type, the x-axis scaling, and the output image
(PNG or SVG by extension).
"""

from __future__ import annotations

import argparse
import sys

from .panels import EmptySpec, FigureSpec, SchemaMismatch, render_panel


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="magnomit-figures",
        description="Render response panels from magnomit sweep CSVs")
    ap.add_argument("specs", nargs="+", help="JSON panel spec file(s)")
    args = ap.parse_args(argv)
    for spec_path in args.specs:
        try:
            spec = FigureSpec.from_file(spec_path)
            out = render_panel(spec)
        except (SchemaMismatch, EmptySpec, ValueError, KeyError,
                FileNotFoundError) as exc:
            print(f"error kind={type(exc).__name__} detail={exc}",
                  file=sys.stderr)
            return 2
        print(f"rendered {spec.panel} panel -> {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
