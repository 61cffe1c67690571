"""Command-line entry point: render figure-spec files to images."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from scapeplot.figures import render
from scapeplot.readers import ReaderError
from scapeplot.spec import SpecError, load_spec


def _fail(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scapeplot",
        description="Render figures from simulator output files.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render one figure from a YAML spec file")
    p_render.add_argument("spec", metavar="SPEC", type=Path,
                          help="figure-spec YAML file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help, 2 for usage errors
        return 0 if e.code in (0, None) else 1
    try:
        result = render(load_spec(args.spec))
    except (SpecError, ReaderError) as e:
        _fail(str(e))
        return 1
    except Exception as e:  # runtime failure
        _fail(f"{type(e).__name__}: {e}")
        return 2
    print(result.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
