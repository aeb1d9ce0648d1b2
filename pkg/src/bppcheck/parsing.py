"""Text front-ends: the problem language, the actor-system format, and
actor-level property formulas.

The problem grammar is the hand-written recursive-descent kind: whitespace
and newlines are insignificant between tokens, ``#`` starts a comment,
keywords (initial, rules, formula, nil) are reserved. Numbers accept 0 in
addition to the positive decimals of the base grammar. Every parse error
carries a 1-based line/column pointing at the first offending token.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .acs import Acs, AcsPlace, AcsRule, ConvertedBpp, Nop, PropertyAtom, Recv, Send, Spawn
from .acs import lift_formula, mail_ref, name_ref
from .core import TAU, Bpp, Marking, Rule, parikh
from .ctl import (
    AF,
    EF,
    EG,
    And,
    ANext,
    Atom,
    Cmp,
    ENext,
    Formula,
    Imp,
    LinearAtom,
    Not,
    Or,
)
from .errors import ParseError

KEYWORDS = ("initial", "rules", "formula", "nil")
UNARY_OPS = {"Neg": Not, "EG": EG, "AF": AF, "EF": EF}
BINARY_OPS = {"Conj": And, "Disj": Or, "Imp": Imp}
NEXT_OPS = {"EX": ENext, "AX": ANext}
CMP_TOKENS = {"==": Cmp.EQ, "!=": Cmp.NE, ">=": Cmp.GE, "<=": Cmp.LE, ">": Cmp.GT, "<": Cmp.LT}


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | punct | eof
    text: str
    line: int
    col: int


_PUNCT = ("->", "==", "!=", ">=", "<=", "(", ")", ",", "*", "+", "-", ">", "<", ":", "!", "?")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        matched = None
        for punct in _PUNCT:
            if text.startswith(punct, i):
                matched = punct
                break
        if matched:
            tokens.append(Token("punct", matched, line, col))
            i += len(matched)
            col += len(matched)
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            word = text[i:j]
            if len(word) > 1 and word[0] == "0":
                raise ParseError(line, col, "a number without leading zeros", word)
            tokens.append(Token("number", word, line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or text.startswith(TAU, i):
            # Identifiers may carry underscores at the model level (converted
            # in/out symbols); the strict surface-grammar contexts reject
            # them one level up, with the token's position.
            j = i
            if text.startswith(TAU, i):
                j = i + len(TAU)
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tokens.append(Token("ident", word, line, col))
            col += j - i
            i = j
            continue
        raise ParseError(line, col, "a token", ch)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, expected: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        found = tok.text if tok.kind != "eof" else "end of input"
        return ParseError(tok.line, tok.col, expected, found)

    def expect_punct(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.text != text:
            raise self.fail(f"'{text}'")
        return self.next()

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind != "ident" or tok.text != word:
            raise self.fail(f"'{word}'")
        return self.next()

    def expect_number(self) -> int:
        tok = self.peek()
        if tok.kind != "number":
            raise self.fail("a number")
        self.next()
        return int(tok.text)

    def at_ident(self, text: str | None = None) -> bool:
        tok = self.peek()
        if tok.kind != "ident":
            return False
        return text is None or tok.text == text


@dataclass(frozen=True)
class ProblemFile:
    bpp: Bpp
    initial: Marking
    formula: Formula
    source: str = field(default="", compare=False)


def _expect_var(cur: _Cursor, expected: str = "a symbol name") -> Token:
    # Problem-file VAR is strict: letter first, letters and digits only.
    tok = cur.peek()
    if tok.kind != "ident" or not tok.text[0].isalpha() or "_" in tok.text:
        raise cur.fail(expected)
    if tok.text in KEYWORDS:
        raise cur.fail(expected)
    return cur.next()


def parse_problem(text: str, source: str = "") -> ProblemFile:
    """Parse one problem file: system, initial expression, formula."""
    cur = _Cursor(tokenize(text))
    declared: dict[str, None] = {}

    cur.expect_keyword("initial")
    initial_syms = [_expect_var(cur).text]
    declared.setdefault(initial_syms[0])
    while cur.peek().text == ",":
        cur.next()
        sym = _expect_var(cur).text
        initial_syms.append(sym)
        declared.setdefault(sym)

    cur.expect_keyword("rules")
    rules: list[Rule] = []
    first_rule_tok = cur.peek()
    while cur.at_ident() and not cur.at_ident("formula"):
        rules.append(_parse_rule(cur, len(rules), declared))
    if not rules:
        raise cur.fail("a rule", first_rule_tok)

    cur.expect_keyword("formula")
    bpp = Bpp(tuple(declared), tuple(rules))
    formula = _parse_formula(cur, bpp)
    tok = cur.peek()
    if tok.kind != "eof":
        raise cur.fail("end of input")
    return ProblemFile(
        bpp=bpp,
        initial=parikh(initial_syms, bpp),
        formula=formula,
        source=source,
    )


def _parse_rule(cur: _Cursor, rid: int, declared: dict[str, None]) -> Rule:
    lhs = _expect_var(cur).text
    declared.setdefault(lhs)
    cur.expect_punct("->")
    action = TAU
    rhs: list[str] = []

    if cur.at_ident("nil"):
        cur.next()
        return Rule(rid, lhs, action, ())

    tok = cur.peek()
    if tok.kind != "ident" or tok.text in KEYWORDS:
        raise cur.fail("a symbol, label, or 'nil'")
    first = cur.next().text
    if cur.peek().text == "->":
        # A label: the base identifier shape, or the reserved action
        # written out explicitly.
        if first != TAU and (not first[0].isalpha() or "_" in first):
            raise cur.fail("an action label", tok)
        action = first
        cur.next()
        if cur.at_ident("nil"):
            cur.next()
            return Rule(rid, lhs, action, ())
        rhs.append(_expect_var(cur).text)
    else:
        if not first[0].isalpha() or "_" in first:
            raise cur.fail("a symbol name", tok)
        rhs.append(first)
    declared.setdefault(rhs[0])
    while cur.peek().text == ",":
        cur.next()
        sym = _expect_var(cur).text
        rhs.append(sym)
        declared.setdefault(sym)
    return Rule(rid, lhs, action, tuple(rhs))


def _parse_formula(cur: _Cursor, bpp: Bpp) -> Formula:
    tok = cur.peek()
    if tok.kind == "ident" and cur.peek(1).text == "(":
        if tok.text in UNARY_OPS:
            cur.next()
            cur.expect_punct("(")
            sub = _parse_formula(cur, bpp)
            cur.expect_punct(")")
            return UNARY_OPS[tok.text](sub)
        if tok.text in BINARY_OPS:
            cur.next()
            cur.expect_punct("(")
            left = _parse_formula(cur, bpp)
            cur.expect_punct(",")
            right = _parse_formula(cur, bpp)
            cur.expect_punct(")")
            return BINARY_OPS[tok.text](left, right)
        if tok.text in NEXT_OPS:
            cur.next()
            cur.expect_punct("(")
            label_tok = cur.peek()
            if label_tok.kind != "ident" or label_tok.text in KEYWORDS:
                raise cur.fail("an action label")
            if label_tok.text not in bpp.actions:
                raise cur.fail("a declared action label")
            cur.next()
            cur.expect_punct(",")
            sub = _parse_formula(cur, bpp)
            cur.expect_punct(")")
            return NEXT_OPS[tok.text](label_tok.text, sub)
    return _parse_query(cur, bpp)


def _parse_query(cur: _Cursor, bpp: Bpp) -> Atom:
    terms: list[tuple[str, int]] = []

    def parse_mult(sign: int) -> None:
        tok = cur.peek()
        if tok.kind != "ident" or tok.text in KEYWORDS or tok.text == TAU:
            raise cur.fail("a symbol name")
        if tok.text not in bpp.index:
            raise cur.fail("a declared symbol")
        cur.next()
        coeff = 1
        if cur.peek().text == "*":
            cur.next()
            coeff = cur.expect_number()
        terms.append((tok.text, sign * coeff))

    parse_mult(1)
    while cur.peek().text in ("+", "-"):
        sign = 1 if cur.next().text == "+" else -1
        parse_mult(sign)

    cmp_tok = cur.peek()
    if cmp_tok.text not in CMP_TOKENS:
        raise cur.fail("a comparison operator")
    cur.next()
    bound = cur.expect_number()
    return Atom(LinearAtom(tuple(terms), CMP_TOKENS[cmp_tok.text], bound))


# ---------------------------------------------------------------------------
# Actor-system format
# ---------------------------------------------------------------------------


def parse_acs(text: str, source: str = "") -> tuple[Acs, AcsPlace]:
    """Parse the actor-system description format.

    Sections: ``states`` (required), ``procs`` and ``msgs`` (optional),
    ``rules`` with one transition per line, and a required ``init`` with
    ``state:count`` and ``(proc,msg):count`` entries (omitted entries are 0).
    """
    cur = _Cursor(tokenize(text))

    def ident_list(what: str) -> list[str]:
        names = [_expect_acs_name(cur, what)]
        while cur.peek().text == ",":
            cur.next()
            names.append(_expect_acs_name(cur, what))
        return names

    cur.expect_keyword("states")
    states = ident_list("a state name")
    procs: list[str] = []
    msgs: list[str] = []
    if cur.at_ident("procs"):
        cur.next()
        procs = ident_list("a process name")
    if cur.at_ident("msgs"):
        cur.next()
        msgs = ident_list("a message name")

    cur.expect_keyword("rules")
    state_set = set(states)
    proc_set = set(procs)
    msg_set = set(msgs)
    if len(states) != len(state_set) or len(procs) != len(proc_set) or len(msgs) != len(msg_set):
        raise cur.fail("distinct declarations", cur.tokens[0])

    rules: list[AcsRule] = []
    first_rule_tok = cur.peek()
    while cur.at_ident() and not cur.at_ident("init"):
        rules.append(_parse_acs_rule(cur, len(rules), state_set, proc_set, msg_set))
    if not rules:
        raise cur.fail("a rule", first_rule_tok)

    cur.expect_keyword("init")
    acs = Acs(tuple(states), tuple(procs), tuple(msgs), tuple(rules))
    u = [0] * len(states)
    v = [0] * len(acs.pairs)
    seen: set = set()
    while True:
        tok = cur.peek()
        if tok.text == "(":
            cur.next()
            p_tok = cur.peek()
            p = _expect_acs_name(cur, "a declared process")
            if p not in proc_set:
                raise cur.fail("a declared process", p_tok)
            cur.expect_punct(",")
            m_tok = cur.peek()
            m = _expect_acs_name(cur, "a declared message")
            if m not in msg_set:
                raise cur.fail("a declared message", m_tok)
            cur.expect_punct(")")
            cur.expect_punct(":")
            count = cur.expect_number()
            if ("pair", p, m) in seen:
                raise cur.fail("a fresh init entry", p_tok)
            seen.add(("pair", p, m))
            v[acs.pair_index[(p, m)]] = count
        elif tok.kind == "ident":
            if tok.text not in state_set:
                raise cur.fail("a declared state")
            cur.next()
            cur.expect_punct(":")
            count = cur.expect_number()
            if ("state", tok.text) in seen:
                raise cur.fail("a fresh init entry", tok)
            seen.add(("state", tok.text))
            u[acs.state_index[tok.text]] = count
        else:
            raise cur.fail("an init entry")
        if cur.peek().text != ",":
            break
        cur.next()
    if cur.peek().kind != "eof":
        raise cur.fail("end of input")
    return acs, AcsPlace(tuple(u), tuple(v))


def _expect_acs_name(cur: _Cursor, what: str) -> str:
    tok = cur.peek()
    if tok.kind != "ident" or tok.text == TAU:
        raise cur.fail(what)
    return cur.next().text


def _parse_acs_rule(cur, rid: int, states: set, procs: set, msgs: set) -> AcsRule:
    src_tok = cur.peek()
    src = _expect_acs_name(cur, "a declared state")
    if src not in states:
        raise cur.fail("a declared state", src_tok)
    cur.expect_punct("->")

    tok = cur.peek()
    if tok.kind != "ident":
        raise cur.fail("an operation (nop, new, p!m, p?m)")
    if tok.text == "nop":
        cur.next()
        op = Nop()
    elif tok.text == "new":
        cur.next()
        spawn_tok = cur.peek()
        spawned = _expect_acs_name(cur, "a declared state")
        if spawned not in states:
            raise cur.fail("a declared state", spawn_tok)
        op = Spawn(spawned)
    else:
        proc = cur.next().text
        if proc not in procs:
            raise cur.fail("a declared process", tok)
        kind_tok = cur.peek()
        if kind_tok.text not in ("!", "?"):
            raise cur.fail("'!' or '?'")
        cur.next()
        msg_tok = cur.peek()
        msg = _expect_acs_name(cur, "a declared message")
        if msg not in msgs:
            raise cur.fail("a declared message", msg_tok)
        op = Send(proc, msg) if kind_tok.text == "!" else Recv(proc, msg)

    cur.expect_punct("->")
    dst_tok = cur.peek()
    dst = _expect_acs_name(cur, "a declared state")
    if dst not in states:
        raise cur.fail("a declared state", dst_tok)
    return AcsRule(rid, src, op, dst)


# ---------------------------------------------------------------------------
# Actor-level properties
# ---------------------------------------------------------------------------


def parse_property(text: str, cb: ConvertedBpp, source: str = "") -> Formula:
    """Parse a property formula over a converted actor system.

    The formula grammar is the problem-file one; atoms may reference state
    names, converted in/out symbol names, and mailbox terms mail(p, m).
    """
    cur = _Cursor(tokenize(text))
    tree = _parse_property_formula(cur, cb)
    if cur.peek().kind != "eof":
        raise cur.fail("end of input")
    return lift_formula(cb, tree)


def _parse_property_formula(cur: _Cursor, cb: ConvertedBpp):
    tok = cur.peek()
    if tok.kind == "ident" and cur.peek(1).text == "(" and tok.text != "mail":
        if tok.text in UNARY_OPS:
            cur.next()
            cur.expect_punct("(")
            sub = _parse_property_formula(cur, cb)
            cur.expect_punct(")")
            return UNARY_OPS[tok.text](sub)
        if tok.text in BINARY_OPS:
            cur.next()
            cur.expect_punct("(")
            left = _parse_property_formula(cur, cb)
            cur.expect_punct(",")
            right = _parse_property_formula(cur, cb)
            cur.expect_punct(")")
            return BINARY_OPS[tok.text](left, right)
        if tok.text in NEXT_OPS:
            cur.next()
            cur.expect_punct("(")
            label_tok = cur.peek()
            if label_tok.kind != "ident":
                raise cur.fail("an action label")
            if label_tok.text not in cb.bpp.actions:
                raise cur.fail("a declared action label")
            cur.next()
            cur.expect_punct(",")
            sub = _parse_property_formula(cur, cb)
            cur.expect_punct(")")
            return NEXT_OPS[tok.text](label_tok.text, sub)
    return _parse_property_atom(cur, cb)


def _parse_property_atom(cur: _Cursor, cb: ConvertedBpp) -> PropertyAtom:
    terms: list = []

    def parse_mult(sign: int) -> None:
        tok = cur.peek()
        if tok.kind != "ident" or tok.text in KEYWORDS or tok.text == TAU:
            raise cur.fail("a state, symbol, or mail(p, m) term")
        if tok.text == "mail" and cur.peek(1).text == "(":
            cur.next()
            cur.expect_punct("(")
            p_tok = cur.peek()
            proc = _expect_acs_name(cur, "a declared process")
            cur.expect_punct(",")
            m_tok = cur.peek()
            msg = _expect_acs_name(cur, "a declared message")
            cur.expect_punct(")")
            if (proc, msg) not in cb.acs.pair_index:
                raise cur.fail("a declared mailbox slot", p_tok)
            ref = mail_ref(proc, msg)
        else:
            if tok.text not in cb.bpp.index:
                raise cur.fail("a declared state or converted symbol")
            cur.next()
            ref = name_ref(tok.text)
        coeff = 1
        if cur.peek().text == "*":
            cur.next()
            coeff = cur.expect_number()
        terms.append((ref, sign * coeff))

    parse_mult(1)
    while cur.peek().text in ("+", "-"):
        sign = 1 if cur.next().text == "+" else -1
        parse_mult(sign)
    cmp_tok = cur.peek()
    if cmp_tok.text not in CMP_TOKENS:
        raise cur.fail("a comparison operator")
    cur.next()
    bound = cur.expect_number()
    return PropertyAtom(tuple(terms), CMP_TOKENS[cmp_tok.text], bound)


# ---------------------------------------------------------------------------
# Pretty-printing (round-trip support and converted-system export)
# ---------------------------------------------------------------------------


def atom_to_text(atom: LinearAtom) -> str:
    if not atom.terms:
        raise ValueError("cannot print an atom with no terms")
    if atom.terms[0][1] < 0:
        raise ValueError("cannot print an atom whose first coefficient is negative")
    parts: list[str] = []
    for i, (sym, coeff) in enumerate(atom.terms):
        mag = abs(coeff)
        mult = sym if mag == 1 else f"{sym} * {mag}"
        if i == 0:
            parts.append(mult)
        else:
            parts.append(("+ " if coeff >= 0 else "- ") + mult)
    return " ".join(parts) + f" {atom.cmp.value} {atom.bound}"


def formula_to_text(f: Formula) -> str:
    if isinstance(f, Atom):
        return atom_to_text(f.atom)
    if isinstance(f, Not):
        return f"Neg({formula_to_text(f.sub)})"
    if isinstance(f, And):
        return f"Conj({formula_to_text(f.left)}, {formula_to_text(f.right)})"
    if isinstance(f, Or):
        return f"Disj({formula_to_text(f.left)}, {formula_to_text(f.right)})"
    if isinstance(f, Imp):
        return f"Imp({formula_to_text(f.left)}, {formula_to_text(f.right)})"
    if isinstance(f, ENext):
        return f"EX({f.action}, {formula_to_text(f.sub)})"
    if isinstance(f, ANext):
        return f"AX({f.action}, {formula_to_text(f.sub)})"
    if isinstance(f, EG):
        return f"EG({formula_to_text(f.sub)})"
    if isinstance(f, AF):
        return f"AF({formula_to_text(f.sub)})"
    if isinstance(f, EF):
        return f"EF({formula_to_text(f.sub)})"
    raise TypeError(f"not a formula node: {f!r}")


def problem_to_text(pf: ProblemFile) -> str:
    """Render a problem so that parsing it back gives an equal ProblemFile."""
    if sum(pf.initial) == 0:
        raise ValueError("cannot print an empty initial expression")
    initial_syms: list[str] = []
    for sym, count in zip(pf.bpp.symbols, pf.initial):
        initial_syms.extend([sym] * count)
    lines = ["initial", ", ".join(initial_syms), "rules"]
    for rule in pf.bpp.rules:
        rhs = ", ".join(rule.rhs) if rule.rhs else "nil"
        if rule.action == TAU:
            lines.append(f"{rule.lhs} -> {rhs}")
        else:
            lines.append(f"{rule.lhs} -> {rule.action} -> {rhs}")
    lines.append("formula")
    lines.append(formula_to_text(pf.formula))
    return "\n".join(lines) + "\n"
