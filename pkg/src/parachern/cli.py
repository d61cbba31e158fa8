"""Command-line entry point.

Evaluates a scene file (or a batch of generated random scenes), runs its
compute and verify commands, and emits a text or JSON report.  Exit codes:
0 all commands ran and every verification passed, 1 a verification failed,
2 parse error, 3 semantic error (including unreadable files and missing
integrals).  Reports are deterministic for fixed inputs and seed; timing
figures are only included when requested so that JSON output is stable.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import grothendieck
from .bundles import (
    character_element,
    chern_character,
    cover_order,
    parabolic_chern,
)
from .chow import MissingIntegralError, integrate
from .frontend import (
    Command,
    Diagnostic,
    ElaborationError,
    ParseError,
    Scene,
    elaborate,
    parse_program,
)
from .rings import RingElement
from .scenegen import random_scene_text

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_SEMANTIC_ERROR = 3


class _CommandFailure(Exception):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic
        super().__init__(str(diagnostic))


def _class_strings(classes: list[RingElement]) -> list[str]:
    return [str(c) for c in classes]


def _class_terms(element: RingElement) -> list[dict]:
    ring = element.ring
    out = []
    for mono, coeff in element.sorted_terms():
        named = [
            [name, exp] for name, exp in zip(ring.names, mono) if exp > 0
        ]
        out.append({"coefficient": str(coeff), "monomial": named})
    return out


def _ct_polynomial_string(classes: list[RingElement]) -> str:
    parts = []
    for i, c in enumerate(classes):
        if i == 0:
            parts.append(str(c))
            continue
        if c.is_zero:
            continue
        power = "t" if i == 1 else f"t^{i}"
        parts.append(f"({c})*{power}")
    return " + ".join(parts)


def _run_compute(scene: Scene, command: Command) -> dict:
    name = command.names[0]
    bundle = scene.parabolics[name]
    order = cover_order(bundle)
    entry = {
        "command": f"compute {command.kind}",
        "target": name,
        "rank": bundle.rank,
        "cover_order": order,
    }
    if command.kind == "chern":
        classes = parabolic_chern(bundle)
    elif command.kind == "ch":
        classes = chern_character(bundle)
    elif command.kind == "ctpoly":
        classes = parabolic_chern(bundle)
        entry["polynomial"] = _ct_polynomial_string(classes)
    elif command.kind == "degree":
        try:
            value = integrate(scene.variety, character_element(bundle))
        except MissingIntegralError as exc:
            raise _CommandFailure(
                Diagnostic("error", str(exc), command.pos[0], command.pos[1])
            ) from None
        entry["value"] = str(value)
        return entry
    else:
        raise ValueError(f"unknown compute kind {command.kind!r}")
    entry["classes"] = _class_strings(classes)
    entry["terms"] = [_class_terms(c) for c in classes]
    return entry


def _run_verify(scene: Scene, command: Command) -> dict:
    if command.kind == "prop1":
        a, b = command.names
        checks = grothendieck.verify_pair_identities(
            scene.parabolics[a], scene.parabolics[b]
        )
        return {
            "command": "verify prop1",
            "targets": [a, b],
            "passed": checks.passed,
            "whitney": checks.whitney,
            "dual": checks.dual,
            "tensor": checks.tensor,
        }
    name = command.names[0]
    bundle = scene.parabolics[name]
    entry = {
        "command": f"verify {command.kind}",
        "target": name,
        "rank": bundle.rank,
        "cover_order": cover_order(bundle),
    }
    if command.kind == "grothendieck":
        check = grothendieck.verify_relation(bundle)
        entry["passed"] = check.passed
        entry["residual"] = (
            None if check.passed else [str(c) for c in check.residual.coeffs]
        )
    elif command.kind == "corollary1":
        entry["passed"] = grothendieck.verify_cover_pullback(bundle)
    else:
        raise ValueError(f"unknown verify kind {command.kind!r}")
    return entry


def execute_scene(
    scene: Scene, *, verify_all: bool = False, timings: bool = False
) -> tuple[list[dict], bool]:
    """Run the scene's commands in order; returns (entries, all_passed)."""
    commands = list(scene.commands)
    if verify_all:
        for name in scene.parabolics:
            commands.append(Command("verify", "grothendieck", (name,), (0, 0)))
            commands.append(Command("verify", "corollary1", (name,), (0, 0)))
    entries = []
    all_passed = True
    for command in commands:
        started = time.perf_counter()
        if command.action == "compute":
            entry = _run_compute(scene, command)
        else:
            entry = _run_verify(scene, command)
        if timings:
            entry["timing_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
        if entry.get("passed") is False:
            all_passed = False
        entries.append(entry)
    return entries, all_passed


def _diagnostics_payload(diagnostics) -> list[dict]:
    return [
        {
            "severity": d.severity,
            "message": d.message,
            "line": d.line,
            "column": d.column,
        }
        for d in diagnostics
    ]


def evaluate_text(
    text: str,
    source: str,
    *,
    verify_all: bool = False,
    max_denominator: int = 10**6,
    timings: bool = False,
) -> dict:
    """Parse, elaborate and execute one scene; returns the report mapping."""
    report = {"schema": SCHEMA_VERSION, "source": source}
    try:
        ast = parse_program(text)
    except ParseError as exc:
        report["status"] = "parse_error"
        report["exit_code"] = EXIT_PARSE_ERROR
        report["diagnostics"] = _diagnostics_payload(exc.diagnostics)
        return report
    try:
        scene = elaborate(ast, max_denominator=max_denominator)
    except ElaborationError as exc:
        report["status"] = "semantic_error"
        report["exit_code"] = EXIT_SEMANTIC_ERROR
        report["diagnostics"] = _diagnostics_payload(exc.diagnostics)
        return report
    try:
        entries, all_passed = execute_scene(
            scene, verify_all=verify_all, timings=timings
        )
    except _CommandFailure as exc:
        report["status"] = "semantic_error"
        report["exit_code"] = EXIT_SEMANTIC_ERROR
        report["diagnostics"] = _diagnostics_payload([exc.diagnostic])
        return report
    report["status"] = "ok" if all_passed else "verification_failed"
    report["exit_code"] = EXIT_OK if all_passed else EXIT_VERIFICATION_FAILED
    report["results"] = entries
    return report


def _entry_text(entry: dict) -> str:
    command = entry["command"]
    if command.startswith("compute"):
        target = entry["target"]
        if "value" in entry:
            line = f"{command} {target}: value={entry['value']}"
        else:
            classes = ", ".join(entry["classes"])
            line = (
                f"{command} {target}: rank={entry['rank']} "
                f"cover_order={entry['cover_order']} classes=[{classes}]"
            )
            if "polynomial" in entry:
                line += f" polynomial={entry['polynomial']}"
        return line
    if command == "verify prop1":
        a, b = entry["targets"]
        flags = {
            key: "PASS" if entry[key] else "FAIL"
            for key in ("passed", "whitney", "dual", "tensor")
        }
        return (
            f"{command} {a} {b}: {flags['passed']} "
            f"whitney={flags['whitney']} dual={flags['dual']} "
            f"tensor={flags['tensor']}"
        )
    target = entry["target"]
    status = "PASS" if entry["passed"] else "FAIL"
    line = (
        f"{command} {target}: {status} rank={entry['rank']} "
        f"cover_order={entry['cover_order']}"
    )
    if entry.get("residual"):
        line += f" residual=[{', '.join(entry['residual'])}]"
    return line


def _render_text(report: dict, stdout, stderr):
    print(f"source: {report['source']}", file=stdout)
    for diagnostic in report.get("diagnostics", ()):
        print(
            f"{report['source']}:{diagnostic['line']}:{diagnostic['column']}: "
            f"{diagnostic['severity']}: {diagnostic['message']}",
            file=stderr,
        )
    for entry in report.get("results", ()):
        line = _entry_text(entry)
        if "timing_ms" in entry:
            line += f" timing_ms={entry['timing_ms']}"
        print(line, file=stdout)
    for scene_report in report.get("scenes", ()):
        print(f"scene {scene_report['name']} seed={scene_report['seed']}", file=stdout)
        for entry in scene_report.get("results", ()):
            print("  " + _entry_text(entry), file=stdout)
    print(f"status: {report['status']}", file=stdout)


def _render(report: dict, as_json: bool, stdout, stderr):
    if as_json:
        print(json.dumps(report, indent=2), file=stdout)
    else:
        _render_text(report, stdout, stderr)


def _run_random(args, stdout, stderr) -> int:
    master = random.Random(args.seed)
    weight_cap = min(12, args.max_denominator)
    scenes = []
    worst = EXIT_OK
    for index in range(args.random):
        scene_seed = master.randrange(1 << 30)
        text = random_scene_text(
            random.Random(scene_seed), weight_denominator_max=weight_cap
        )
        sub = evaluate_text(
            text,
            f"random-{index:04d}",
            verify_all=True,
            max_denominator=args.max_denominator,
            timings=args.timings,
        )
        scenes.append(
            {
                "name": f"random-{index:04d}",
                "seed": scene_seed,
                "status": sub["status"],
                "results": sub.get("results", []),
                "diagnostics": sub.get("diagnostics", []),
            }
        )
        worst = max(worst, sub["exit_code"])
    report = {
        "schema": SCHEMA_VERSION,
        "source": f"random(count={args.random}, seed={args.seed})",
        "status": "ok" if worst == EXIT_OK else "failed",
        "exit_code": worst,
        "scenes": scenes,
    }
    _render(report, args.json, stdout, stderr)
    return worst


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parachern",
        description=(
            "Evaluate a scene file: build the variety model, compute parabolic "
            "Chern data, and run the requested verifications."
        ),
    )
    parser.add_argument(
        "inputs",
        nargs="*",
        help="scene file to evaluate, optionally preceded by the word 'compute'",
    )
    parser.add_argument("--json", action="store_true", help="emit a JSON report")
    parser.add_argument(
        "--verify-all",
        action="store_true",
        help="append relation and pullback verifications for every parabolic bundle",
    )
    parser.add_argument(
        "--random",
        type=int,
        metavar="COUNT",
        help="generate and verify COUNT random scenes instead of reading a file",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for --random")
    parser.add_argument(
        "--max-denominator",
        type=int,
        default=10**6,
        help="cap on weight and coefficient denominators",
    )
    parser.add_argument(
        "--timings",
        action="store_true",
        help="include per-command timings (makes output non-reproducible)",
    )
    return parser


def run(argv=None, *, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    args = build_arg_parser().parse_args(argv)
    if args.random is not None:
        if args.random < 1:
            print("error: --random needs a positive count", file=stderr)
            return EXIT_SEMANTIC_ERROR
        return _run_random(args, stdout, stderr)
    inputs = list(args.inputs)
    if inputs and inputs[0] == "compute":
        inputs = inputs[1:]
    if len(inputs) != 1:
        print("error: expected exactly one scene file", file=stderr)
        return EXIT_SEMANTIC_ERROR
    path = Path(inputs[0])
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        report = {
            "schema": SCHEMA_VERSION,
            "source": path.name,
            "status": "semantic_error",
            "exit_code": EXIT_SEMANTIC_ERROR,
            "diagnostics": [
                {
                    "severity": "error",
                    "message": f"cannot read file: {exc}",
                    "line": 1,
                    "column": 1,
                }
            ],
        }
        _render(report, args.json, stdout, stderr)
        return EXIT_SEMANTIC_ERROR
    report = evaluate_text(
        text,
        path.name,
        verify_all=args.verify_all,
        max_denominator=args.max_denominator,
        timings=args.timings,
    )
    _render(report, args.json, stdout, stderr)
    return report["exit_code"]


def main() -> None:
    sys.exit(run())
