"""Script assembly: declarations plus one assertion, rendered once."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import IllFormedFormula
from .terms import Node, free_vars, has_quantifier, to_sexpr

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

QF_LOGIC = "QF_LIA"
QUANTIFIED_LOGIC = "LIA"


@dataclass(frozen=True)
class SmtScript:
    """One self-contained SMT-LIB2 script.

    ``text`` is exactly what goes over the solver's stdin; the timeout is
    runner metadata (the runner kills the child), not part of the script.
    """

    logic: str
    declarations: tuple[str, ...]
    assertion_text: str
    text: str
    produce_models: bool
    n_asserts: int = 1

    @property
    def n_vars(self) -> int:
        return len(self.declarations)


def to_smtlib(
    node: Node,
    declarations: tuple[str, ...],
    *,
    produce_models: bool = True,
    logic: str | None = None,
) -> SmtScript:
    """Serialize a formula with its declared integer constants.

    Every free variable must be declared exactly once; the logic defaults to
    quantifier-free linear integers unless a quantifier survives in the body.
    """
    seen: set[str] = set()
    for name in declarations:
        if not _NAME_RE.match(name):
            raise IllFormedFormula(f"bad constant name {name!r}")
        if name in seen:
            raise IllFormedFormula(f"constant {name!r} declared twice")
        seen.add(name)
    undeclared = free_vars(node) - seen
    if undeclared:
        raise IllFormedFormula(f"free variables not declared: {sorted(undeclared)}")
    if logic is None:
        logic = QUANTIFIED_LOGIC if has_quantifier(node) else QF_LOGIC

    assertion = to_sexpr(node)
    lines = []
    if produce_models:
        lines.append("(set-option :produce-models true)")
    lines.append(f"(set-logic {logic})")
    for name in declarations:
        lines.append(f"(declare-const {name} Int)")
    lines.append(f"(assert {assertion})")
    lines.append("(check-sat)")
    if produce_models:
        lines.append("(get-model)")
    text = "\n".join(lines) + "\n"
    return SmtScript(
        logic=logic,
        declarations=tuple(declarations),
        assertion_text=assertion,
        text=text,
        produce_models=produce_models,
    )
