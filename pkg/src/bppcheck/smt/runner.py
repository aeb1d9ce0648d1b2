"""Run an external SMT solver on a script and decode what came back.

The wire protocol is SMT-LIB2 text over the child's stdin/stdout, nothing
else. The default command is ``z3 -in -smt2`` when a z3 binary is on PATH;
otherwise the bundled pure-Python reference solver is used, still as a
separate process.
"""

from __future__ import annotations

import os
import shlex
import shutil
import subprocess
import sys
import time
from dataclasses import dataclass, field

from ..errors import (
    MissingBinding,
    NonIntegerBinding,
    SolverCrashed,
    SolverNotFound,
    SolverProtocolError,
)
from .script import SmtScript
from .sexpr import parse_all

#: Extra time a child gets to die after its budget, before we report anyway.
KILL_GRACE_S = 2.0

ENV_SOLVER = "BPPCHECK_SOLVER"


@dataclass(frozen=True)
class SolverConfig:
    command: tuple[str, ...]
    timeout_s: float = 60.0


@dataclass(frozen=True)
class SolverOutcome:
    status: str  # sat | unsat | unknown
    model: dict[str, int] | None
    wall_ms: float
    raw: str
    timed_out: bool = False


@dataclass(frozen=True)
class Verdict:
    """Decoded check result: what holds, which engine said so, and how."""

    result: str  # holds | not-holds | unknown
    engine: str  # ef | eg-bounded
    k: int | None = None
    witness: dict[str, int] | None = None
    stats: dict[str, int | float] = field(default_factory=dict)

    def exit_code(self) -> int:
        return {"holds": 0, "not-holds": 1}.get(self.result, 2)


def default_solver_command() -> tuple[str, ...]:
    if shutil.which("z3"):
        return ("z3", "-in", "-smt2")
    return (sys.executable, "-m", "bppcheck.refsolver")


def resolve_solver(command_line: str | None = None, timeout_s: float = 60.0) -> SolverConfig:
    """Build a solver config from an explicit command line, the
    BPPCHECK_SOLVER environment variable, or the built-in default."""
    source = command_line or os.environ.get(ENV_SOLVER)
    if source:
        parts = tuple(shlex.split(source))
        if not parts:
            raise SolverNotFound(source)
        return SolverConfig(parts, timeout_s)
    return SolverConfig(default_solver_command(), timeout_s)


def run_solver(script: SmtScript, config: SolverConfig) -> SolverOutcome:
    """Spawn the solver, feed it the script, and decode its verdict."""
    start = time.perf_counter()
    try:
        proc = subprocess.run(
            list(config.command),
            input=script.text.encode(),
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            timeout=config.timeout_s + KILL_GRACE_S,
        )
    except FileNotFoundError:
        raise SolverNotFound(config.command[0]) from None
    except subprocess.TimeoutExpired as exc:
        wall_ms = (time.perf_counter() - start) * 1000.0
        raw = (exc.stdout or b"").decode(errors="replace")
        return SolverOutcome("unknown", None, wall_ms, raw, timed_out=True)
    wall_ms = (time.perf_counter() - start) * 1000.0
    raw = proc.stdout.decode(errors="replace")

    status = None
    for line in raw.splitlines():
        word = line.strip()
        if word in ("sat", "unsat", "unknown"):
            status = word
            break
    if status is None:
        if proc.returncode != 0:
            raise SolverCrashed(proc.returncode, raw)
        raise SolverProtocolError(f"no verdict in solver output: {raw[:500]!r}")

    model = None
    if status == "sat" and script.produce_models:
        model = parse_model(raw, script.declarations)
    return SolverOutcome(status, model, wall_ms, raw)


def parse_model(raw: str, expected: tuple[str, ...]) -> dict[str, int]:
    """Extract integer bindings for the expected names from solver output.

    Accepts the ``(model (define-fun ...))`` wrapper as well as the bare
    list-of-define-fun form, and both ``-2`` and ``(- 2)`` literals. Extra
    bindings are ignored.
    """
    text = raw
    idx = text.find("sat")
    if idx >= 0:
        text = text[idx + 3 :]
    try:
        forms = parse_all(text)
    except SolverProtocolError:
        raise
    bindings: dict[str, int] = {}

    def eat(form) -> None:
        if not isinstance(form, list):
            return
        if form and form[0] == "define-fun":
            if len(form) != 5:
                return
            _, name, args, sort, value = form
            if args != [] or not isinstance(name, str):
                return
            if sort != "Int":
                bindings.setdefault(name, _NON_INT)
                return
            parsed = _int_value(value)
            if parsed is None:
                raise NonIntegerBinding(name, repr(value))
            bindings[name] = parsed
            return
        for item in form:
            eat(item)

    for form in forms:
        eat(form)

    out: dict[str, int] = {}
    for name in expected:
        if name not in bindings:
            raise MissingBinding(name)
        value = bindings[name]
        if value is _NON_INT:
            raise NonIntegerBinding(name, "non-integer sort")
        out[name] = value
    return out


class _NonInt:
    pass


_NON_INT = _NonInt()


def _int_value(value) -> int | None:
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            return None
    if isinstance(value, list) and len(value) == 2 and value[0] == "-":
        inner = _int_value(value[1])
        return None if inner is None else -inner
    return None
