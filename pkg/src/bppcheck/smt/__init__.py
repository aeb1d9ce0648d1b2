"""Solver back-end: formula terms, script serialization, process driver."""

from .runner import (
    ENV_SOLVER,
    SolverConfig,
    SolverOutcome,
    Verdict,
    default_solver_command,
    parse_model,
    resolve_solver,
    run_solver,
)
from .script import QF_LOGIC, QUANTIFIED_LOGIC, SmtScript, to_smtlib
from .terms import (
    FALSE,
    TRUE,
    AndF,
    BoolConst,
    Exists,
    Lin,
    Node,
    NotF,
    OrF,
    conj,
    disj,
    eval_node,
    exists,
    free_vars,
    has_quantifier,
    lin,
    neg,
    to_sexpr,
)

__all__ = [
    "ENV_SOLVER",
    "FALSE",
    "TRUE",
    "AndF",
    "BoolConst",
    "Exists",
    "Lin",
    "Node",
    "NotF",
    "OrF",
    "QF_LOGIC",
    "QUANTIFIED_LOGIC",
    "SmtScript",
    "SolverConfig",
    "SolverOutcome",
    "Verdict",
    "conj",
    "default_solver_command",
    "disj",
    "eval_node",
    "exists",
    "free_vars",
    "has_quantifier",
    "lin",
    "neg",
    "parse_model",
    "resolve_solver",
    "run_solver",
    "to_sexpr",
    "to_smtlib",
]
