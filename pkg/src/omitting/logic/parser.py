"""Text syntax for monadic formulas.

Grammar (whitespace insignificant)::

    formula  := disj ["->" formula]
    disj     := conj ("|" conj)*
    conj     := unary ("&" unary)*
    unary    := "!" unary | quant | "(" formula ")" | atom | "true" | "false"
    quant    := ("A" | "E" | "E>=" nat) var "." formula
    atom     := pred "(" var ")" | var "=" var
    pred     := Name | Name "_" index | Name "<" [entry ("," entry)*] ">"

Predicate names start with an upper-case letter, variables with a lower-case
one.  Quantifier bodies extend as far right as possible.  ``format_formula``
prints the canonical form, which parses back to the same tree.
"""

from __future__ import annotations

import re

from .syntax import (
    And, Atom, Const, CountExists, Eq, Exists, Forall, Formula, Implies, Not, Or, Pred,
    free_vars,
)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnboundVariableError(ValueError):
    pass


class UnknownPredicateError(ValueError):
    pass


_TOKENS = re.compile(r"\s*(?:(->|>=|[!&|().=,<>_])|(\d+)|([A-Za-z][A-Za-z0-9]*))")
_KEYWORDS = {"A", "E", "true", "false"}


def _tokenize(text: str):
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKENS.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            out.append((m.group(1), m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("nat", int(m.group(2)), m.start(2)))
        else:
            out.append(("id", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text, metavars):
        self.toks = _tokenize(text)
        self.pos = 0
        self.metavars = metavars or {}

    def peek(self, k=0):
        return self.toks[self.pos + k]

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise FormulaSyntaxError(msg, tok[2])

    def take(self, kind, value=None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            self.error(f"expected {want!r}, got {got}")
        self.pos += 1
        return tok[1]

    def at(self, kind, value=None):
        tok = self.peek()
        return tok[0] == kind and (value is None or tok[1] == value)

    def formula(self):
        left = self.disj()
        if self.at("->"):
            self.take("->")
            return Implies(left, self.formula())
        return left

    def disj(self):
        left = self.conj()
        while self.at("|"):
            self.take("|")
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("&"):
            self.take("&")
            left = And(left, self.unary())
        return left

    def unary(self):
        if self.at("!"):
            self.take("!")
            return Not(self.unary())
        if self.at("("):
            self.take("(")
            f = self.formula()
            self.take(")")
            return f
        if (self.at("id", "A") or self.at("id", "E")) and self.peek(1)[0] not in ("(", "_", "<"):
            return self.quantifier()
        if self.at("id", "true"):
            self.take("id")
            return Const(True)
        if self.at("id", "false"):
            self.take("id")
            return Const(False)
        return self.atom()

    def quantifier(self):
        q = self.take("id")
        n = None
        if q == "E" and self.at(">="):
            self.take(">=")
            tok = self.peek()
            n = self.take("nat")
            if n < 1:
                self.error("counting threshold must be >= 1", tok)
        var = self.variable()
        self.take(".")
        body = self.formula()
        if q == "A":
            return Forall(var, body)
        if n is None:
            return Exists(var, body)
        return CountExists(n, var, body)

    def variable(self):
        tok = self.peek()
        name = self.take("id")
        if not name[0].islower() or name in _KEYWORDS:
            self.error(f"expected a variable, got {name!r}", tok)
        return name

    def atom(self):
        tok = self.peek()
        if tok[0] != "id":
            self.error("expected an atom")
        if tok[1][0].islower():
            left = self.variable()
            self.take("=")
            return Eq(left, self.variable())
        pred = self.predicate()
        self.take("(")
        var = self.variable()
        self.take(")")
        return Atom(pred, var)

    def predicate(self):
        name = self.take("id")
        if self.at("_"):
            self.take("_")
            return Pred(name, self.index_entry("nat"))
        if self.at("<"):
            self.take("<")
            entries = []
            if not self.at(">"):
                entries.append(self.index_entry(None))
                while self.at(","):
                    self.take(",")
                    entries.append(self.index_entry(None))
            self.take(">")
            return Pred(name, tuple(entries))
        return Pred(name)

    def index_entry(self, want):
        tok = self.peek()
        if tok[0] == "nat":
            return self.take("nat")
        if tok[0] == "id" and tok[1] in self.metavars:
            kind = self.metavars[tok[1]]
            if want == "nat" and kind != "nat":
                self.error(f"metavariable {tok[1]!r} is a path, not a number", tok)
            return self.take("id")
        self.error("expected an index")


def parse_formula(text: str, signature=None, free=(), metavars=None) -> Formula:
    """Parse ``text``.

    ``signature`` (a collection of family names) rejects unknown predicates;
    ``free`` lists the variables allowed to occur free (none by default, so
    the result is a sentence); ``metavars`` maps schema metavariable names to
    ``"nat"`` or ``"path"`` and allows them in index positions.
    """
    p = _Parser(text, metavars)
    f = p.formula()
    p.take("end")
    if signature is not None:
        allowed = set(signature)
        from .syntax import predicates
        for pred in predicates(f):
            if pred.family not in allowed:
                raise UnknownPredicateError(f"unknown predicate {pred}")
    unbound = free_vars(f) - set(free)
    if unbound:
        raise UnboundVariableError(f"unbound variable(s): {', '.join(sorted(unbound))}")
    return f


_PREC = {Implies: 1, Or: 2, And: 3}


def format_formula(f: Formula) -> str:
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"{f.pred}({f.var})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        a = f.arg
        inner = format_formula(a)
        if isinstance(a, (Atom, Const, Not)):
            return "!" + inner
        return f"!({inner})"
    if isinstance(f, (And, Or, Implies)):
        op = {And: "&", Or: "|", Implies: "->"}[type(f)]
        prec = _PREC[type(f)]
        left = _operand(f.left, prec, left_side=True, parent=type(f))
        right = _operand(f.right, prec, left_side=False, parent=type(f))
        return f"{left} {op} {right}"
    if isinstance(f, Forall):
        head = f"A {f.var}."
    elif isinstance(f, CountExists):
        head = f"E>={f.n} {f.var}."
    else:
        head = f"E {f.var}."
    body = format_formula(f.body)
    if isinstance(f.body, (And, Or, Implies)):
        body = f"({body})"
    return f"{head} {body}"


def _operand(g, prec, left_side, parent):
    text = format_formula(g)
    if isinstance(g, (Exists, Forall, CountExists)):
        return f"({text})"
    gp = _PREC.get(type(g))
    if gp is None:
        return text
    if gp < prec:
        return f"({text})"
    if gp == prec:
        # & and | associate left, -> associates right
        needs = (not left_side) if parent is not Implies else left_side
        return f"({text})" if needs else text
    return text
