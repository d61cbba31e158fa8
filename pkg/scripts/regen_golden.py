#!/usr/bin/env python3
"""Regenerate the expected JSON reports for the valid golden scenes.

Run from the repository root after an intentional change to report content:

    python3 scripts/regen_golden.py
"""

from __future__ import annotations

import io
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from parachern.cli import run  # noqa: E402

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden" / "valid"


def main() -> int:
    for scene in sorted(GOLDEN.glob("*.pch")):
        out = io.StringIO()
        code = run([str(scene), "--json", "--verify-all"], stdout=out, stderr=out)
        if code != 0:
            print(f"FAILED {scene.name}: exit {code}")
            print(out.getvalue())
            return 1
        expected = scene.with_suffix(".expected.json")
        expected.write_text(out.getvalue(), encoding="utf-8")
        print(f"wrote {expected.name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
