"""Command-line surface.

Commands: validate, fm, fm-profile, k0q, kstable, telescope, export-dot.
Exit codes: 0 success, 1 parse/validation failure, 2 inconclusive at the
level budget (so scripts can branch on it), 3 internal invariant violation.

Reports are deterministic: identical input and flags produce byte-identical
output, so the timing block counts levels instead of wall-clock time.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Optional

from . import __version__
from .colimit import ColimitResult, fm_dimension, fm_profile, k0_rational_dimension
from .diagram import validate as validate_diagram
from .io import (
    ParseError,
    document_to_json,
    export_dot,
    from_diagram,
    input_digest,
    parse,
    to_diagram,
)
from .kstability import (
    INCONCLUSIVE,
    InfiniteChainError,
    InjectivityRequired,
    KChainWitness,
    classify,
    telescope,
)
from .truncation import build_system

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INCONCLUSIVE = 2
EXIT_INTERNAL = 3

DEFAULT_BUDGET = 64


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--input", required=True, help="path to a diagram JSON file, or - for stdin")
    shared.add_argument("--budget", type=int, default=None, help=f"max levels to materialize (default {DEFAULT_BUDGET}; AFK_BUDGET overrides)")
    shared.add_argument("--format", choices=("json", "text"), default="json", help="report format")

    parser = argparse.ArgumentParser(prog="afk", description="Nonstable K-theory of AF-algebras from Bratteli diagrams, in exact arithmetic.")
    parser.add_argument("--version", action="version", version=f"afk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[shared], help="check the diagram's structural constraints")
    p_fm = sub.add_parser("fm", parents=[shared], help="dimension of one homotopy degree")
    p_fm.add_argument("--m", type=int, required=True, help="degree (even degrees vanish)")
    p_prof = sub.add_parser("fm-profile", parents=[shared], help="dimensions for degrees 1..max-m")
    p_prof.add_argument("--max-m", type=int, required=True, dest="max_m")
    sub.add_parser("k0q", parents=[shared], help="rank of rational K0 (untruncated colimit)")
    sub.add_parser("kstable", parents=[shared], help="decide K-stability")
    p_tel = sub.add_parser("telescope", parents=[shared], help="re-present with min summand size >= min-dim")
    p_tel.add_argument("--min-dim", type=int, required=True, dest="min_dim")
    p_dot = sub.add_parser("export-dot", parents=[shared], help="render the diagram as DOT")
    p_dot.add_argument("--degree", type=int, default=None, help="label nodes with degree-m survival instead of sizes")
    return parser


def _resolve_budget(args) -> int:
    budget = args.budget
    if budget is None:
        env = os.environ.get("AFK_BUDGET")
        if env is not None:
            try:
                budget = int(env)
            except ValueError:
                raise ParseError("AFK_BUDGET", f"not an integer: {env!r}") from None
        else:
            budget = DEFAULT_BUDGET
    if budget < 1:
        raise ParseError("--budget", f"must be at least 1, got {budget}")
    return budget


def _witness_payload(w: KChainWitness) -> dict:
    return {
        "k": w.k,
        "start_level": w.start_level,
        "node_path": list(w.node_path),
        "cycle": {"period": w.cycle_period, "summands": list(w.cycle_summands)},
        "kind": w.kind,
    }


def _matrix_payload(m) -> list[list[int]]:
    return m.to_rows()


def _colimit_payload(res: ColimitResult) -> dict:
    out = {
        "dimension": res.dimension,
        "exact": res.exact,
        "stabilized_at": res.stabilized_at,
        "budget_exceeded": res.budget_exceeded,
        "per_level_ranks": [[k, r] for k, r in res.per_level_ranks],
    }
    if res.note:
        out["note"] = res.note
    return out


def _report(command: str, digest: str, flags: dict, status: str, result: dict, levels_used: int, budget: int) -> dict:
    return {
        "tool": {"name": "afk", "version": __version__},
        "command": command,
        "input_digest": digest,
        "flags": flags,
        "status": status,
        "result": result,
        "timing": {"budget_levels": budget, "levels_materialized": levels_used},
    }


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(_render_text(report))


def _render_text(report: dict) -> str:
    lines = [
        f"afk {report['tool']['version']} — {report['command']}",
        f"input:  {report['input_digest']}",
        f"status: {report['status']}",
    ]
    result = report["result"]

    def fmt_dim(block: dict, label: str) -> list[str]:
        kind = "exact" if block["exact"] else (
            "budget exceeded" if block.get("budget_exceeded") else "lower bound"
        )
        out = [f"{label}: {block['dimension']} ({kind})"]
        if block.get("stabilized_at") is not None:
            out.append(f"  stabilized at level {block['stabilized_at']}")
        if block.get("note"):
            out.append(f"  note: {block['note']}")
        return out

    cmd = report["command"]
    if cmd == "validate":
        lines.append(f"valid:     {result['valid']}")
        lines.append(f"injective: {result['injective']}")
        if result["edge_unital"]:
            lines.append("unital edges: " + " ".join(
                f"{i + 1}:{'yes' if u else 'no'}" for i, u in enumerate(result["edge_unital"])
            ))
        for p in result["problems"]:
            lines.append(f"problem: {p['message']}")
    elif cmd == "fm":
        lines += fmt_dim(result, f"F_{result['m']} dimension")
        for k, mat in enumerate(result.get("maps", []), start=1):
            lines.append(f"  map {k} -> {k + 1}: {mat}")
    elif cmd == "fm-profile":
        for row in result["profile"]:
            mark = "" if row["exact"] else " (lower bound)"
            lines.append(f"m={row['m']}: {row['dimension']}{mark}")
    elif cmd == "k0q":
        lines += fmt_dim(result, "K0 rational rank")
    elif cmd == "kstable":
        lines.append(f"verdict: {result['verdict']}")
        if result.get("witness"):
            w = result["witness"]
            lines.append(
                f"witness: K={w['k']} from level {w['start_level']} "
                f"(cycle period {w['cycle']['period']}, kind {w['kind']})"
            )
        if result.get("certificate"):
            for entry in result["certificate"]:
                lines.append(f"certified m={entry['m']} via cuts {entry['cuts']}")
    elif cmd == "telescope":
        lines.append(f"outcome: {result['outcome']}")
        if result.get("witness"):
            w = result["witness"]
            lines.append(f"witness: K={w['k']} from level {w['start_level']}")
        if result.get("diagram"):
            lines.append("diagram: " + json.dumps(result["diagram"], sort_keys=True))
    elif cmd == "export-dot":
        return result["dot"]
    if report.get("error"):
        lines.append(f"error: {report['error']['message']}")
    return "\n".join(lines) + "\n"


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(path, str(exc)) from None


def _preflight(args):
    text = _read_input(args.input)
    doc = parse(text)
    diagram = to_diagram(doc)
    return doc, diagram, input_digest(doc)


def _dispatch(args) -> int:
    budget = _resolve_budget(args)
    fmt = args.format
    doc, diagram, digest = _preflight(args)
    report_v = validate_diagram(diagram)

    if args.command == "validate":
        result = {
            "valid": report_v.ok,
            "injective": report_v.injective,
            "edge_unital": list(report_v.edge_unital),
            "problems": [
                {"kind": p.kind, "level": p.level, "summand": p.summand, "message": p.message}
                for p in report_v.problems
            ],
        }
        status = "ok" if report_v.ok else "invalid"
        _emit(_report("validate", digest, {"budget": budget}, status, result, diagram.prefix_len, budget), fmt)
        return EXIT_OK if report_v.ok else EXIT_INVALID

    if not report_v.ok:
        result = {
            "problems": [
                {"kind": p.kind, "level": p.level, "summand": p.summand, "message": p.message}
                for p in report_v.problems
            ]
        }
        _emit(_report(args.command, digest, {"budget": budget}, "invalid", result, 0, budget), fmt)
        return EXIT_INVALID

    if args.command == "fm":
        flags = {"m": args.m, "budget": budget}
        res = fm_dimension(diagram, args.m, budget)
        result = _colimit_payload(res)
        result["m"] = args.m
        levels_used = 0
        if args.m % 2 == 1:
            system = build_system(diagram, args.m, budget)
            levels_used = system.levels
            result["dims"] = list(system.dims)
            cap = len(system.maps)
            if system.cycle_start is not None:
                cap = min(cap, system.cycle_start + (system.period or 1) - 1)
            result["maps"] = [_matrix_payload(m) for m in system.maps[:cap]]
            if system.cycle_start is not None:
                result["cycle"] = {"start": system.cycle_start, "period": system.period}
        status = "ok" if res.exact else "inconclusive"
        _emit(_report("fm", digest, flags, status, result, levels_used, budget), fmt)
        return EXIT_OK if res.exact else EXIT_INCONCLUSIVE

    if args.command == "fm-profile":
        flags = {"max_m": args.max_m, "budget": budget}
        rows = []
        all_exact = True
        for m, res in fm_profile(diagram, args.max_m, budget):
            rows.append(
                {
                    "m": m,
                    "dimension": res.dimension,
                    "exact": res.exact,
                    "stabilized_at": res.stabilized_at,
                    "budget_exceeded": res.budget_exceeded,
                }
            )
            all_exact = all_exact and res.exact
        status = "ok" if all_exact else "inconclusive"
        _emit(_report("fm-profile", digest, flags, status, {"profile": rows}, budget, budget), fmt)
        return EXIT_OK if all_exact else EXIT_INCONCLUSIVE

    if args.command == "k0q":
        flags = {"budget": budget}
        res = k0_rational_dimension(diagram, budget)
        status = "ok" if res.exact else "inconclusive"
        _emit(_report("k0q", digest, flags, status, _colimit_payload(res), budget, budget), fmt)
        return EXIT_OK if res.exact else EXIT_INCONCLUSIVE

    if args.command == "kstable":
        flags = {"budget": budget}
        try:
            verdict = classify(diagram, budget)
        except InjectivityRequired as exc:
            result = {"problems": [{"kind": "injectivity-required", "message": str(exc)}]}
            _emit(_report("kstable", digest, flags, "invalid", result, 0, budget), fmt)
            return EXIT_INVALID
        result: dict[str, Any] = {"verdict": verdict.status}
        if verdict.witness is not None:
            result["witness"] = _witness_payload(verdict.witness)
        if verdict.certificate is not None:
            result["certificate"] = [{"m": m, "cuts": list(cuts)} for m, cuts in verdict.certificate]
        inconclusive = verdict.status == "inconclusive-at-budget"
        status = "inconclusive" if inconclusive else "ok"
        _emit(_report("kstable", digest, flags, status, result, budget, budget), fmt)
        return EXIT_INCONCLUSIVE if inconclusive else EXIT_OK

    if args.command == "telescope":
        flags = {"min_dim": args.min_dim, "budget": budget}
        try:
            out = telescope(diagram, args.min_dim, budget)
        except InjectivityRequired as exc:
            result = {"problems": [{"kind": "injectivity-required", "message": str(exc)}]}
            _emit(_report("telescope", digest, flags, "invalid", result, 0, budget), fmt)
            return EXIT_INVALID
        except InfiniteChainError as exc:
            result = {"outcome": "infinite-chain", "witness": _witness_payload(exc.witness)}
            _emit(_report("telescope", digest, flags, "ok", result, budget, budget), fmt)
            return EXIT_OK
        if out is INCONCLUSIVE:
            result = {"outcome": "inconclusive"}
            _emit(_report("telescope", digest, flags, "inconclusive", result, budget, budget), fmt)
            return EXIT_INCONCLUSIVE
        result = {
            "outcome": "telescoped",
            "min_dim": args.min_dim,
            "diagram": document_to_json(from_diagram(out)),
        }
        _emit(_report("telescope", digest, flags, "ok", result, budget, budget), fmt)
        return EXIT_OK

    if args.command == "export-dot":
        flags = {"budget": budget, "degree": args.degree}
        dot = export_dot(diagram, degree=args.degree, budget=budget)
        if fmt == "json":
            _emit(_report("export-dot", digest, flags, "ok", {"dot": dot}, budget, budget), fmt)
        else:
            sys.stdout.write(dot)
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command}")


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ParseError as exc:
        report = {
            "tool": {"name": "afk", "version": __version__},
            "command": args.command,
            "status": "invalid",
            "error": {"locus": exc.locus, "message": exc.reason},
        }
        if args.format == "json":
            sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        else:
            sys.stdout.write(f"afk {__version__} — {args.command}\nstatus: invalid\nerror at {exc.locus}: {exc.reason}\n")
        return EXIT_INVALID
    except BrokenPipeError:  # downstream closed the pipe; not our failure
        return EXIT_OK
    except Exception as exc:  # internal invariant violation
        report = {
            "tool": {"name": "afk", "version": __version__},
            "command": getattr(args, "command", None),
            "status": "error",
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
