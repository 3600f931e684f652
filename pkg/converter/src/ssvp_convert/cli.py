"""Command-line entry point: ``ssvp-convert <in.mat> <out.ssvp>``.

Exit codes follow the analysis CLI's convention: 0 success, 1 runtime
failure (unreadable source, schema or dimension mismatch), 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from .convert import ConvertError, convert


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ssvp-convert",
        description="Convert a UCSD 12-class SSVEP subject MAT file to portable .ssvp",
    )
    parser.add_argument("source", help="subject archive (.mat)")
    parser.add_argument("output", help="output dataset (.ssvp)")
    args = parser.parse_args(argv)
    try:
        summary = convert(args.source, args.output)
    except (ConvertError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(
        f"wrote {args.output} dims={tuple(summary['output_dims'])} "
        f"subject={summary['subject']}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
