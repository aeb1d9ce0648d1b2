"""The fallback solver is load-bearing, so it gets adversarial testing:
random box-bounded formulas are compared against brute-force enumeration,
and classic integer-gap instances are pinned by hand."""

import itertools
import random

from bppcheck.refsolver import solve_text
from bppcheck.refsolver.omega import omega_solve


def run(script: str) -> list[str]:
    return solve_text(script).strip().splitlines()


def status(script: str) -> str:
    return run(script)[0]


class TestOmega:
    def test_trivial_sat_with_witness(self):
        w = omega_solve([("ge", {"x": 1}, 0), ("eq", {"x": 1}, -1)])
        assert w == {"x": 1}

    def test_gcd_infeasible_equality(self):
        # 2x - 2y = 1 has no integer solution.
        assert omega_solve([("eq", {"x": 2, "y": -2}, -1)]) is None

    def test_diophantine_pair(self):
        # 3x + 5y = 4 is solvable over Z.
        w = omega_solve([("eq", {"x": 3, "y": 5}, -4)])
        assert 3 * w["x"] + 5 * w["y"] == 4

    def test_integer_gap_interval(self):
        # 27 <= 8x <= 30 has a real solution but no integer one.
        lits = [("ge", {"x": 8}, -27), ("ge", {"x": -8}, 30)]
        assert omega_solve(lits) is None

    def test_tight_interval_sat(self):
        # 24 <= 8x <= 30 admits x = 3.
        lits = [("ge", {"x": 8}, -24), ("ge", {"x": -8}, 30)]
        w = omega_solve(lits)
        assert w["x"] == 3

    def test_unbounded_direction(self):
        w = omega_solve([("ge", {"x": 1, "y": -3}, -7)])
        assert w["x"] - 3 * w["y"] >= 7

    def test_random_conjunctions_vs_enumeration(self):
        rng = random.Random(101)
        for _ in range(400):
            n_vars = rng.randint(1, 3)
            names = [f"v{i}" for i in range(n_vars)]
            box = 4
            lits = []
            for v in names:
                lits.append(("ge", {v: 1}, box))       # v >= -box
                lits.append(("ge", {v: -1}, box))      # v <= box
            for _ in range(rng.randint(1, 4)):
                coeffs = {v: rng.randint(-4, 4) for v in names}
                kind = rng.choice(["ge", "eq"])
                lits.append((kind, coeffs, rng.randint(-6, 6)))

            expected = False
            for point in itertools.product(range(-box, box + 1), repeat=n_vars):
                env = dict(zip(names, point))
                ok = True
                for kind, coeffs, const in lits:
                    total = sum(c * env.get(v, 0) for v, c in coeffs.items()) + const
                    if kind == "eq" and total != 0:
                        ok = False
                        break
                    if kind == "ge" and total < 0:
                        ok = False
                        break
                if ok:
                    expected = True
                    break
            got = omega_solve(lits)
            assert (got is not None) == expected, lits


class TestScripts:
    def test_simple_sat_model(self):
        out = run(
            """
            (set-option :produce-models true)
            (set-logic QF_LIA)
            (declare-const x Int)
            (assert (and (>= x 0) (= x 1)))
            (check-sat)
            (get-model)
            """
        )
        assert out[0] == "sat"
        assert any("define-fun x () Int 1" in line for line in out)

    def test_assert_false(self):
        assert status("(assert false)(check-sat)") == "unsat"

    def test_empty_disjunction_is_false(self):
        assert status("(assert (or))(check-sat)") == "unsat"

    def test_negative_model_rendering(self):
        out = run(
            """
            (set-option :produce-models true)
            (declare-const x Int)
            (assert (< x (- 1)))
            (check-sat)
            (get-model)
            """
        )
        assert out[0] == "sat"
        assert any("(- " in line for line in out if "define-fun" in line)

    def test_model_unavailable_after_unsat(self):
        out = run("(declare-const x Int)(assert (> x 0))(assert (< x 0))(check-sat)(get-model)")
        assert out[0] == "unsat"
        assert "error" in out[1]

    def test_exists_positive(self):
        assert status("(assert (exists ((t Int)) (and (> t 3) (< t 5))))(check-sat)") == "sat"

    def test_exists_integer_gap(self):
        # A real witness between 3 and 4 exists but no integer one.
        assert status("(assert (exists ((t Int)) (and (> t 3) (< t 4))))(check-sat)") == "unsat"

    def test_forall_true(self):
        script = """
        (declare-const a Int)
        (assert (and (>= a 0) (<= a 5)))
        (assert (forall ((t Int)) (or (< t 0) (>= (+ t a) 0))))
        (check-sat)
        """
        assert status(script) == "sat"

    def test_forall_false(self):
        assert status("(assert (forall ((t Int)) (>= t 0)))(check-sat)") == "unsat"

    def test_half_bounded_probe_finds_witness(self):
        # a is only bounded below, but a probe near the bound suffices.
        script = """
        (declare-const a Int)
        (assert (>= a 0))
        (assert (forall ((t Int)) (or (< t 0) (>= (+ t a) 0))))
        (check-sat)
        """
        assert status(script) == "sat"

    def test_unbounded_unsat_is_honest_unknown(self):
        # forall t. t + a >= 0 is false for every a, but proving that needs
        # quantifier elimination, which this engine does not do.
        script = """
        (declare-const a Int)
        (assert (>= a 0))
        (assert (forall ((t Int)) (>= (+ t a) 0)))
        (check-sat)
        """
        assert status(script) == "unknown"

    def test_shadowed_binders(self):
        script = """
        (assert (exists ((t Int)) (and (>= t 5) (exists ((t Int)) (<= t 0)))))
        (check-sat)
        """
        assert status(script) == "sat"

    def test_nested_quantifier_under_negation(self):
        # not exists t. (t >= 0 and t <= x) is satisfied only when x < 0.
        script = """
        (declare-const x Int)
        (assert (not (exists ((t Int)) (and (>= t 0) (<= t x)))))
        (assert (>= x (- 5)))
        (check-sat)
        (get-model)
        """
        out = run("(set-option :produce-models true)" + script)
        assert out[0] == "sat"
        value = [l for l in out if "define-fun x" in l][0]
        assert "(- " in value  # strictly negative witness

    def test_distinct(self):
        assert status("(declare-const x Int)(assert (distinct x x))(check-sat)") == "unsat"
        assert (
            status("(declare-const x Int)(declare-const y Int)(assert (distinct x y))(check-sat)")
            == "sat"
        )

    def test_implication(self):
        script = """
        (declare-const x Int)
        (assert (=> (>= x 0) (>= x 10)))
        (assert (<= x 20))
        (check-sat)
        """
        assert status(script) == "sat"

    def test_multiplication_by_constant(self):
        script = """
        (declare-const x Int)
        (assert (= (* 2 x) 7))
        (check-sat)
        """
        assert status(script) == "unsat"

    def test_unsupported_is_unknown(self):
        assert status("(declare-const x Int)(assert (= (* x x) 4))(check-sat)") == "unknown"


class TestRandomQuantifierFree:
    def test_vs_enumeration(self):
        rng = random.Random(202)
        for _ in range(250):
            n_vars = rng.randint(1, 3)
            names = [f"w{i}" for i in range(n_vars)]
            box = 3
            formula, py_eval = _random_formula(rng, names, depth=2)
            decls = "".join(f"(declare-const {v} Int)" for v in names)
            bounds = "".join(
                f"(assert (and (>= {v} (- {box})) (<= {v} {box})))" for v in names
            )
            script = f"{decls}{bounds}(assert {formula})(check-sat)"
            expected = any(
                py_eval(dict(zip(names, point)))
                for point in itertools.product(range(-box, box + 1), repeat=n_vars)
            )
            got = status(script)
            assert got == ("sat" if expected else "unsat"), script


class TestRandomSingleQuantifier:
    def test_exists_block_vs_enumeration(self):
        # exists(q) phi(q, w) with both q and w boxed: compare against
        # enumeration over the product box.
        rng = random.Random(303)
        for _ in range(150):
            names = ["w0"]
            qvar = "q0"
            box = 3
            formula, py_eval = _random_formula(rng, names + [qvar], depth=2)
            inner = f"(exists (({qvar} Int)) (and (>= {qvar} (- {box})) (<= {qvar} {box}) {formula}))"
            wrap = rng.choice(["plain", "neg"])
            if wrap == "neg":
                inner = f"(not {inner})"
            script = (
                f"(declare-const w0 Int)"
                f"(assert (and (>= w0 (- {box})) (<= w0 {box})))"
                f"(assert {inner})(check-sat)"
            )

            def outer_truth(wval: int) -> bool:
                found = any(
                    py_eval({"w0": wval, qvar: qval})
                    for qval in range(-box, box + 1)
                )
                return (not found) if wrap == "neg" else found

            expected = any(outer_truth(wv) for wv in range(-box, box + 1))
            got = status(script)
            assert got == ("sat" if expected else "unsat"), script


def _random_formula(rng, names, depth):
    """Random boolean combination over linear atoms; returns (smt, evaluator)."""
    if depth == 0 or rng.random() < 0.35:
        coeffs = {v: rng.randint(-3, 3) for v in rng.sample(names, rng.randint(1, len(names)))}
        const = rng.randint(-5, 5)
        op = rng.choice([">=", "<=", ">", "<", "=", "distinct"])
        terms = [f"(* {c if c >= 0 else f'(- {-c})'} {v})" for v, c in coeffs.items()]
        if not terms:
            terms = ["0"]
        lhs = terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"
        rhs = str(const) if const >= 0 else f"(- {-const})"
        smt = f"({op} {lhs} {rhs})"

        def ev(env, coeffs=coeffs, const=const, op=op):
            total = sum(c * env[v] for v, c in coeffs.items())
            return {
                ">=": total >= const,
                "<=": total <= const,
                ">": total > const,
                "<": total < const,
                "=": total == const,
                "distinct": total != const,
            }[op]

        return smt, ev
    kind = rng.choice(["and", "or", "not", "=>"])
    if kind == "not":
        smt, ev = _random_formula(rng, names, depth - 1)
        return f"(not {smt})", lambda env, ev=ev: not ev(env)
    a_smt, a_ev = _random_formula(rng, names, depth - 1)
    b_smt, b_ev = _random_formula(rng, names, depth - 1)
    if kind == "and":
        return f"(and {a_smt} {b_smt})", lambda env: a_ev(env) and b_ev(env)
    if kind == "or":
        return f"(or {a_smt} {b_smt})", lambda env: a_ev(env) or b_ev(env)
    return f"(=> {a_smt} {b_smt})", lambda env: (not a_ev(env)) or b_ev(env)
