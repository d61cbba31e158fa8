#!/usr/bin/env python3
"""Run a randomized verification sweep from the command line.

Thin wrapper over the CLI's --random mode; handy for quick stress runs:

    python3 scripts/sweep.py --count 200 --seed 7
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from parachern.cli import run  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()
    argv = ["--random", str(args.count), "--seed", str(args.seed)]
    if args.json:
        argv.append("--json")
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
