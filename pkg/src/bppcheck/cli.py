"""Command-line front end.

Exit codes: 0 the property holds, 1 it does not, 2 unknown (solver gave up
or timed out), 3 usage or parse error, 4 solver or environment failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .acs import convert, convert_place
from .ctl import FormulaClass, classify, desugar
from .ef import check_ef_detailed
from .eg import check_eg
from .errors import (
    BppCheckError,
    MixedFormula,
    ParseError,
    SolverCrashed,
    SolverNotFound,
    SolverProtocolError,
)
from .oracle import to_dot
from .parsing import parse_acs, parse_problem, parse_property
from .smt import SmtScript, Verdict, resolve_solver

EXIT_HOLDS = 0
EXIT_NOT_HOLDS = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3
EXIT_ENVIRONMENT = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract says 3
        raise _UsageError(message)


@dataclass
class Report:
    verdict: Verdict
    total_ms: float
    scripts: list[SmtScript] = field(default_factory=list)
    source: str = ""


def build_parser() -> _Parser:
    parser = _Parser(
        prog="bppcheck",
        description="Check branching-time properties of basic parallel processes "
        "and actor communicating systems with an SMT back end.",
    )
    parser.add_argument("inputs", nargs="+", metavar="input",
                        help="problem file, or with --acs: system file and property file")
    parser.add_argument("--acs", action="store_true",
                        help="treat the input as an actor system plus a property file")
    parser.add_argument("--mode", choices=("auto", "ef", "eg"), default="auto",
                        help="engine selection (default: auto by formula class)")
    parser.add_argument("-k", type=int, default=10, metavar="N",
                        help="step bound for the bounded engine (default 10)")
    parser.add_argument("--solver", metavar="CMD",
                        help="solver command line reading SMT-LIB2 on stdin "
                        "(default: z3 -in -smt2 when available, else the bundled solver)")
    parser.add_argument("--timeout", type=float, default=60.0, metavar="SECS",
                        help="per-solver-call budget in seconds (default 60)")
    parser.add_argument("--emit-smt", metavar="PATH",
                        help="dump the exact script bytes sent to the solver")
    parser.add_argument("--dot", metavar="PATH",
                        help="write the explored transition graph in DOT format")
    parser.add_argument("--stats", action="store_true",
                        help="print constraint and timing statistics")
    parser.add_argument("--format", choices=("text", "json"), default="text",
                        help="report format (default text)")
    parser.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="check multiple problem files concurrently")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        opts = parser.parse_args(argv)
        return _dispatch(opts)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except MixedFormula as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverNotFound, SolverCrashed, SolverProtocolError) as err:
        print(f"solver error: {err}", file=sys.stderr)
        return EXIT_ENVIRONMENT
    except BppCheckError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ENVIRONMENT


def _dispatch(opts) -> int:
    if opts.k < 0:
        raise _UsageError("k must be >= 0")
    if opts.jobs < 1:
        raise _UsageError("--jobs must be >= 1")

    if opts.acs:
        if len(opts.inputs) != 2:
            raise _UsageError("--acs takes exactly two files: system and property")
        report = _run_acs(opts.inputs[0], opts.inputs[1], opts)
        print(render_report(report, opts.format, stats=opts.stats))
        return report.verdict.exit_code()

    if len(opts.inputs) == 1:
        report = _run_problem(opts.inputs[0], opts)
        print(render_report(report, opts.format, stats=opts.stats))
        return report.verdict.exit_code()

    # Batch mode: independent checks, one solver process each.
    if opts.emit_smt or opts.dot:
        raise _UsageError("--emit-smt/--dot need a single input file")
    with ThreadPoolExecutor(max_workers=opts.jobs) as pool:
        reports = list(pool.map(lambda p: _run_problem(p, opts), opts.inputs))
    code = EXIT_HOLDS
    for path, report in zip(opts.inputs, reports):
        print(f"== {path} ==")
        print(render_report(report, opts.format, stats=opts.stats))
        code = max(code, report.verdict.exit_code())
    return code


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _run_problem(path: str, opts) -> Report:
    problem = parse_problem(_read(path), source=path)
    return _check(problem.bpp, problem.initial, problem.formula, opts)


def _run_acs(system_path: str, property_path: str, opts) -> Report:
    acs, place = parse_acs(_read(system_path), source=system_path)
    cb = convert(acs)
    init = convert_place(cb, place)
    formula = parse_property(_read(property_path), cb, source=property_path)
    return _check(cb.bpp, init, formula, opts)


def _check(bpp, init, formula, opts) -> Report:
    config = resolve_solver(opts.solver, timeout_s=opts.timeout)
    scripts: list[SmtScript] = []

    def capture(index: int, script: SmtScript) -> None:
        scripts.append(script)

    core = desugar(formula)
    start = time.perf_counter()
    if opts.mode == "auto":
        cls = classify(core)
        if cls == FormulaClass.EF_CLASS:
            verdict, _, _ = check_ef_detailed(bpp, init, formula, config, on_script=capture)
        elif cls == FormulaClass.EG_CLASS:
            verdict = check_eg(bpp, init, formula, opts.k, config, on_script=capture)
        else:
            raise MixedFormula(
                "formula mixes EF with EG/E<a>; no engine decides it exactly "
                "(E<a> under EF is supported by the bounded engine via --mode eg "
                "when the EF is dropped)"
            )
    elif opts.mode == "ef":
        verdict, _, _ = check_ef_detailed(bpp, init, formula, config, on_script=capture)
    else:
        verdict = check_eg(bpp, init, formula, opts.k, config, on_script=capture)
    total_ms = (time.perf_counter() - start) * 1000.0

    if opts.dot:
        Path(opts.dot).write_text(to_dot(bpp, init), encoding="utf-8")
    if opts.emit_smt:
        _write_scripts(opts.emit_smt, scripts)
    return Report(verdict=verdict, total_ms=total_ms, scripts=scripts)


def _write_scripts(path: str, scripts: list[SmtScript]) -> None:
    if len(scripts) == 1:
        Path(path).write_bytes(scripts[0].text.encode())
        return
    base = Path(path)
    for i, script in enumerate(scripts):
        indexed = base.with_name(f"{base.stem}.{i}{base.suffix}")
        indexed.write_bytes(script.text.encode())


def render_report(report: Report, fmt: str, stats: bool = False) -> str:
    verdict = report.verdict
    if fmt == "json":
        payload = {
            "result": verdict.result,
            "engine": verdict.engine,
            "k": verdict.k,
            "time_ms": round(report.total_ms, 3),
            "witness": verdict.witness,
            "stats": verdict.stats,
        }
        return json.dumps(payload)

    lines = [f"result: {verdict.result}", f"engine: {verdict.engine}"]
    if verdict.engine == "eg-bounded":
        lines.append(f"k: {verdict.k}")
    lines.append(f"time_ms: {report.total_ms:.1f}")
    if verdict.witness:
        for name, value in verdict.witness.items():
            lines.append(f"({name}, {value})")
    if stats:
        parts = " ".join(f"{key}={value}" for key, value in verdict.stats.items())
        lines.append(f"stats: {parts}")
        if verdict.result == "not-holds":
            for script in report.scripts:
                lines.append("constraints:")
                lines.append(script.text.rstrip("\n"))
    return "\n".join(lines)


if __name__ == "__main__":
    raise SystemExit(main())
