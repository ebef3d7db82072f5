"""Command-line entry point.

Usage::

    analyze --config run.toml [--window YYYY:YYYY] [--only a,b,c] [--out dir]

The config path defaults to $BIBLIOSCAPE_CONFIG. Exit status: 0 on success,
1 on a fatal config or corpus error, 2 when at least one analysis was
skipped with warnings.
"""

from __future__ import annotations

import argparse
import os
import sys

from .corpus import EmptyCorpus
from .pipeline import load_config, run

CONFIG_ENV = "BIBLIOSCAPE_CONFIG"


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="analyze",
        description="Run the bibliometric report pipeline over a BibTeX corpus.")
    parser.add_argument("--config", default=os.environ.get(CONFIG_ENV),
                        help=f"TOML run configuration (default: ${CONFIG_ENV})")
    parser.add_argument("--window", metavar="YYYY:YYYY",
                        help="override the observation window")
    parser.add_argument("--only", metavar="A,B,...",
                        help="comma-separated subset of analyses to run")
    parser.add_argument("--out", metavar="DIR", help="override the output directory")
    args = parser.parse_args(argv)

    if not args.config:
        print(f"error: no config given and ${CONFIG_ENV} is not set", file=sys.stderr)
        return 1
    try:
        config = load_config(args.config)
        if args.window:
            start, _, end = args.window.partition(":")
            config.window = (int(start), int(end))
        if args.only:
            config.only = [a.strip() for a in args.only.split(",") if a.strip()]
        if args.out:
            config.output_dir = args.out
        manifest = run(config)
    except (OSError, ValueError, EmptyCorpus) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    for line in manifest.warnings:
        print(f"warning: {line}", file=sys.stderr)
    print(f"wrote {len(manifest.all_outputs())} artifacts to {manifest.output_dir}")
    return 2 if manifest.warnings else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
