import random
import sys

import pytest

from bppcheck.core import Bpp, Rule
from bppcheck.ctl import And, Cmp, EF, EG, Not
from bppcheck.ef import (
    atoms_to_node,
    check_ef,
    check_ef_detailed,
    encode_reachability,
    expected_marking_from_counts,
    final_marking,
    model_firing_counts,
    reached_marking_from_model,
    realize_firing_counts,
)
from bppcheck.errors import BudgetExceeded, MixedFormula, SolverProtocolError
from bppcheck.oracle import ExplorationBudget, check_ef_oracle
from bppcheck.smt import SolverConfig, conj, eval_node, run_solver, to_smtlib

from .conftest import atom, random_atom, random_bpp, random_marking

REF = SolverConfig((sys.executable, "-m", "bppcheck.refsolver"), 30.0)


class TestEncoding:
    def test_variable_naming_and_order(self, grower):
        enc = encode_reachability(grower, (1, 0, 0))
        assert enc.vars.x == {"S": "x_S", "X": "x_X", "Y": "x_Y"}
        assert enc.vars.y == {0: "y_1", 1: "y_2"}
        assert enc.declarations == ("x_S", "x_X", "x_Y", "y_1", "y_2", "z_S", "z_X", "z_Y")

    def test_flow_admits_the_expected_solution(self, grower):
        # x_S=0, x_X=1, x_Y=1 with one use of each rule satisfies the flow
        # equations: check by substituting into each emitted constraint.
        enc = encode_reachability(grower, (1, 0, 0))
        env = {
            "x_S": 0, "x_X": 1, "x_Y": 1,
            "y_1": 1, "y_2": 1,
            "z_S": 1, "z_X": 2, "z_Y": 3,
        }
        assert eval_node(enc.conjunction(), env) is True

    def test_ruleless_encoding_fixes_counts(self):
        bpp = Bpp(("X",), ())
        enc = encode_reachability(bpp, (1,))
        script = to_smtlib(enc.conjunction(), enc.declarations)
        outcome = run_solver(script, REF)
        assert outcome.status == "sat"
        assert outcome.model["x_X"] == 1
        assert enc.vars.y == {}

    def test_total_count_law(self, triangle):
        # Summing the flow equations over all symbols: each rule contributes
        # its net token change (r1 +1, r2 +1, r3 +0), so any solution has
        # x_X1 + x_X2 + x_X3 = 1 + y_1 + y_2.
        enc = encode_reachability(triangle, (1, 0, 0))
        psi = atoms_to_node(atom({"X2": 1}, Cmp.GE, 1), enc.vars.x)
        script = to_smtlib(conj(list(enc.constraints) + [psi]), enc.declarations)
        outcome = run_solver(script, REF)
        assert outcome.status == "sat"
        m = outcome.model
        assert m["x_X1"] + m["x_X2"] + m["x_X3"] == 1 + m["y_1"] + m["y_2"]

    def test_multi_symbol_initial_marking(self, triangle):
        # init X2=2: zero firings already give x_X2 = 2.
        enc = encode_reachability(triangle, (0, 2, 0))
        psi = atoms_to_node(atom({"X2": 1}, Cmp.GE, 2), enc.vars.x)
        script = to_smtlib(conj(list(enc.constraints) + [psi]), enc.declarations)
        assert run_solver(script, REF).status == "sat"


class TestCheckEf:
    def test_grower_reaches_y_one(self, grower):
        verdict = check_ef(grower, (1, 0, 0), EF(atom({"Y": 1}, Cmp.EQ, 1)), REF)
        assert verdict.result == "holds"
        assert verdict.engine == "ef"
        assert verdict.k is None
        assert verdict.witness["x_Y"] == 1

    def test_ruleless_zero_firing(self):
        bpp = Bpp(("X",), ())
        verdict = check_ef(bpp, (1,), EF(atom({"X": 1}, Cmp.GE, 1)), REF)
        assert verdict.result == "holds"

    def test_source_symbol_never_grows(self, grower):
        verdict = check_ef(grower, (1, 0, 0), EF(atom({"S": 1}, Cmp.GE, 2)), REF)
        assert verdict.result == "not-holds"

    def test_boolean_combination(self, grower):
        f = And(EF(atom({"Y": 1}, Cmp.GE, 3)), Not(EF(atom({"S": 1}, Cmp.GE, 2))))
        verdict, _, results = check_ef_detailed(grower, (1, 0, 0), f, REF)
        assert verdict.result == "holds"
        assert len(results) == 2

    def test_atom_only_formula_needs_no_solver(self, grower):
        verdict, _, results = check_ef_detailed(grower, (1, 0, 0), atom({"S": 1}, Cmp.GE, 1), REF)
        assert verdict.result == "holds"
        assert results == []

    def test_mixed_formula_rejected(self, grower):
        with pytest.raises(MixedFormula):
            check_ef(grower, (1, 0, 0), EG(atom({"S": 1}, Cmp.GE, 1)), REF)

    def test_unknown_solver_maps_to_unknown(self, grower):
        fake = SolverConfig((sys.executable, "-c", "print('unknown')"), 5)
        verdict = check_ef(grower, (1, 0, 0), EF(atom({"Y": 1}, Cmp.GE, 1)), fake)
        assert verdict.result == "unknown"
        assert verdict.witness is None

    def test_lying_solver_is_caught(self, grower):
        # A "solver" that answers sat with an all-zero model must be rejected
        # by the independent constraint evaluator.
        lie = (
            "import sys, re\n"
            "data = sys.stdin.read()\n"
            "names = re.findall(r'declare-const (\\S+)', data)\n"
            "print('sat')\n"
            "print('(' + ' '.join(f'(define-fun {n} () Int 0)' for n in names) + ')')\n"
        )
        fake = SolverConfig((sys.executable, "-c", lie), 5)
        with pytest.raises(SolverProtocolError):
            check_ef(grower, (1, 0, 0), EF(atom({"Y": 1}, Cmp.EQ, 1)), fake)


class TestRealize:
    def test_grower_sequence_forced(self, grower):
        seq = realize_firing_counts(grower, (1, 0, 0), {0: 1, 1: 1})
        assert seq == [0, 1]
        assert final_marking(grower, (1, 0, 0), seq) == (0, 1, 1)

    def test_zero_counts_empty_sequence(self, triangle):
        assert realize_firing_counts(triangle, (1, 0, 0), {}) == []

    def test_triangle_two_rule_plan(self, triangle):
        seq = realize_firing_counts(triangle, (1, 0, 0), {0: 1, 2: 1})
        assert seq == [0, 2]
        assert final_marking(triangle, (1, 0, 0), seq) == (1, 1, 0)

    def test_backtracking_needed(self):
        # Rule order tempts the search to kill X first; only X->X then
        # X->nil works.
        bpp = Bpp(("X",), (Rule(0, "X", "a", ()), Rule(1, "X", "a", ("X",))))
        seq = realize_firing_counts(bpp, (1,), {0: 1, 1: 1})
        assert seq == [1, 0]

    def test_unrealizable(self):
        bpp = Bpp(("X", "Y"), (Rule(0, "Y", "a", ()),))
        assert realize_firing_counts(bpp, (1, 0), {0: 1}) is None

    def test_budget(self):
        bpp = Bpp(("X",), (Rule(0, "X", "a", ("X",)),))
        with pytest.raises(BudgetExceeded):
            realize_firing_counts(bpp, (1,), {0: 10_000}, node_budget=100)


class TestDifferential:
    def test_against_oracle_with_witness_validation(self):
        rng = random.Random(424)
        budget = ExplorationBudget(max_states=4000)
        compared = 0
        for i in range(60):
            bpp = random_bpp(rng)
            init = random_marking(rng, bpp)
            psi = random_atom(rng, bpp)
            expected = check_ef_oracle(bpp, init, psi, budget)
            verdict, enc, results = check_ef_detailed(bpp, init, EF(psi), REF)
            assert verdict.result in ("holds", "not-holds")
            if expected.is_definite:
                got = verdict.result == "holds"
                assert got == expected.value, (bpp, init, psi)
                compared += 1
            if verdict.result == "holds":
                model = results[0].model
                counts = model_firing_counts(enc.vars, model)
                seq = realize_firing_counts(bpp, init, counts)
                assert seq is not None, (bpp, init, counts)
                final = final_marking(bpp, init, seq)
                assert final == reached_marking_from_model(bpp, enc.vars, model)
                assert final == expected_marking_from_counts(bpp, init, counts)
                assert psi.atom.evaluate(final, bpp)
        assert compared >= 30
