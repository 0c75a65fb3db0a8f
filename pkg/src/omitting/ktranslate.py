"""Second-order arithmetic formulas and their first-order K-translates.

Each set variable ``X`` becomes a number variable ``x_X`` read as a code, and
``t in X`` becomes ``K(t) & (x_X)_t != 0``.  Number quantifiers are relativised
to ``K``.  The coding atom is uninterpreted.

Grammar::

    formula := disj ["->" formula]
    disj    := conj ("|" conj)*
    conj    := unary ("&" unary)*
    unary   := "!" unary | quant | "(" formula ")" | atom
    quant   := ("E" | "A") numvar "." formula | ("EX" | "AX") SetVar "." formula
    atom    := term "=" term | term "in" SetVar | SetVar "=" SetVar
    term    := prod ("+" prod)*
    prod    := base ("*" base)*
    base    := "0" | "1" | numvar | "(" term ")"
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

RESERVED_PREFIX = "x_"


class SOSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ScopeError(ValueError):
    pass


class NamespaceCollision(ValueError):
    pass


# terms

@dataclass(frozen=True)
class Num:
    value: int  # 0 or 1


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Plus:
    left: object
    right: object


@dataclass(frozen=True)
class Times:
    left: object
    right: object


# second-order formulas

@dataclass(frozen=True)
class TermEq:
    left: object
    right: object


@dataclass(frozen=True)
class Member:
    term: object
    set_var: str


@dataclass(frozen=True)
class SetEq:
    left: str
    right: str


@dataclass(frozen=True)
class SNot:
    arg: object


@dataclass(frozen=True)
class SOr:
    left: object
    right: object


@dataclass(frozen=True)
class SAnd:
    left: object
    right: object


@dataclass(frozen=True)
class SImplies:
    left: object
    right: object


@dataclass(frozen=True)
class SExists:
    var: str
    body: object


@dataclass(frozen=True)
class SForall:
    var: str
    body: object


@dataclass(frozen=True)
class SExistsSet:
    var: str
    body: object


@dataclass(frozen=True)
class SForallSet:
    var: str
    body: object


# first-order formulas with K

@dataclass(frozen=True)
class KEq:
    left: object
    right: object


@dataclass(frozen=True)
class KPred:
    term: object


@dataclass(frozen=True)
class Coded:
    code: str
    term: object


@dataclass(frozen=True)
class KNot:
    arg: object


@dataclass(frozen=True)
class KOr:
    left: object
    right: object


@dataclass(frozen=True)
class KAnd:
    left: object
    right: object


@dataclass(frozen=True)
class KExists:
    var: str
    body: object


# parsing

_TOKEN = re.compile(r"\s*(?:(->|[!&|().=+*])|(\d+)|([A-Za-z][A-Za-z0-9_]*))")
_KEYWORDS = {"E", "A", "EX", "AX", "in"}


def _tokenize(text):
    out, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise SOSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            out.append(("op", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("num", int(m.group(2)), m.start(2)))
        else:
            out.append(("id", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def at(self, kind, value=None):
        t = self.peek()
        return t[0] == kind and (value is None or t[1] == value)

    def take(self, kind, value=None):
        t = self.peek()
        if not self.at(kind, value):
            got = "end of input" if t[0] == "end" else repr(t[1])
            raise SOSyntaxError(f"expected {value or kind!r}, got {got}", t[2])
        self.pos += 1
        return t[1]

    def formula(self):
        left = self.disj()
        if self.at("op", "->"):
            self.take("op")
            return SImplies(left, self.formula())
        return left

    def disj(self):
        left = self.conj()
        while self.at("op", "|"):
            self.take("op")
            left = SOr(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("op", "&"):
            self.take("op")
            left = SAnd(left, self.unary())
        return left

    def unary(self):
        if self.at("op", "!"):
            self.take("op")
            return SNot(self.unary())
        t = self.peek()
        if t[0] == "id" and t[1] in ("E", "A", "EX", "AX"):
            return self.quantifier()
        if self.at("op", "("):
            saved = self.pos
            try:
                self.take("op", "(")
                f = self.formula()
                self.take("op", ")")
                if not (self.at("op", "=") or self.at("id", "in") or
                        self.at("op", "+") or self.at("op", "*")):
                    return f
            except SOSyntaxError:
                pass
            self.pos = saved
        return self.atom()

    def quantifier(self):
        q = self.take("id")
        if q in ("EX", "AX"):
            var = self.set_var()
        else:
            var = self.num_var()
        self.take("op", ".")
        body = self.formula()
        return {"E": SExists, "A": SForall, "EX": SExistsSet, "AX": SForallSet}[q](var, body)

    def set_var(self):
        t = self.peek()
        name = self.take("id")
        if not name[0].isupper() or name in _KEYWORDS:
            raise SOSyntaxError(f"expected a set variable, got {name!r}", t[2])
        return name

    def num_var(self):
        t = self.peek()
        name = self.take("id")
        if not name[0].islower() or name in _KEYWORDS:
            raise SOSyntaxError(f"expected a number variable, got {name!r}", t[2])
        return name

    def atom(self):
        t = self.peek()
        if t[0] == "id" and t[1][0].isupper() and t[1] not in _KEYWORDS:
            left = self.set_var()
            self.take("op", "=")
            return SetEq(left, self.set_var())
        left = self.term()
        if self.at("id", "in"):
            self.take("id")
            return Member(left, self.set_var())
        self.take("op", "=")
        return TermEq(left, self.term())

    def term(self):
        left = self.prod()
        while self.at("op", "+"):
            self.take("op")
            left = Plus(left, self.prod())
        return left

    def prod(self):
        left = self.base()
        while self.at("op", "*"):
            self.take("op")
            left = Times(left, self.base())
        return left

    def base(self):
        t = self.peek()
        if t[0] == "num":
            if t[1] not in (0, 1):
                raise SOSyntaxError("only the constants 0 and 1 are available", t[2])
            self.take("num")
            return Num(t[1])
        if self.at("op", "("):
            self.take("op")
            inner = self.term()
            self.take("op", ")")
            return inner
        return Var(self.num_var())


def parse_so(text: str):
    p = _Parser(text)
    f = p.formula()
    p.take("end")
    nums, sets = free_so_vars(f)
    if nums or sets:
        raise ScopeError(f"unbound variable(s): {', '.join(sorted(nums | sets))}")
    return f


def _term_vars(t):
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Plus, Times)):
        return _term_vars(t.left) | _term_vars(t.right)
    return set()


def free_so_vars(f) -> tuple:
    """``(number variables, set variables)`` occurring free in ``f``."""
    if isinstance(f, TermEq):
        return _term_vars(f.left) | _term_vars(f.right), set()
    if isinstance(f, Member):
        return _term_vars(f.term), {f.set_var}
    if isinstance(f, SetEq):
        return set(), {f.left, f.right}
    if isinstance(f, SNot):
        return free_so_vars(f.arg)
    if isinstance(f, (SOr, SAnd, SImplies)):
        a, b = free_so_vars(f.left), free_so_vars(f.right)
        return a[0] | b[0], a[1] | b[1]
    nums, sets = free_so_vars(f.body)
    if isinstance(f, (SExists, SForall)):
        return nums - {f.var}, sets
    return nums, sets - {f.var}


def so_variables(f) -> set:
    """Every variable name in ``f``, bound or free, of either sort."""
    if isinstance(f, TermEq):
        return _term_vars(f.left) | _term_vars(f.right)
    if isinstance(f, Member):
        return _term_vars(f.term) | {f.set_var}
    if isinstance(f, SetEq):
        return {f.left, f.right}
    if isinstance(f, SNot):
        return so_variables(f.arg)
    if isinstance(f, (SOr, SAnd, SImplies)):
        return so_variables(f.left) | so_variables(f.right)
    return {f.var} | so_variables(f.body)


# formatting

def format_term(t, prec=0) -> str:
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Plus):
        text = f"{format_term(t.left, 1)} + {format_term(t.right, 2)}"
        return f"({text})" if prec > 1 else text
    text = f"{format_term(t.left, 2)} * {format_term(t.right, 3)}"
    return f"({text})" if prec > 2 else text


_SO_PREC = {SImplies: 1, SOr: 2, SAnd: 3}
_SO_OPS = {SImplies: "->", SOr: "|", SAnd: "&"}


def format_so(f) -> str:
    if isinstance(f, TermEq):
        return f"{format_term(f.left)} = {format_term(f.right)}"
    if isinstance(f, Member):
        return f"{format_term(f.term)} in {f.set_var}"
    if isinstance(f, SetEq):
        return f"{f.left} = {f.right}"
    if isinstance(f, SNot):
        inner = format_so(f.arg)
        return f"!{inner}" if isinstance(f.arg, SNot) else f"!({inner})"
    if type(f) in _SO_PREC:
        prec = _SO_PREC[type(f)]
        right_assoc = isinstance(f, SImplies)
        left = _so_operand(f.left, prec, wrap_equal=right_assoc)
        right = _so_operand(f.right, prec, wrap_equal=not right_assoc)
        return f"{left} {_SO_OPS[type(f)]} {right}"
    head = {SExists: "E", SForall: "A", SExistsSet: "EX", SForallSet: "AX"}[type(f)]
    return f"{head} {f.var}. {_quant_body(format_so(f.body), f.body)}"


def _quant_body(text, body):
    return f"({text})" if type(body) in _SO_PREC or type(body) in _K_PREC else text


def _so_operand(g, prec, wrap_equal):
    text = format_so(g)
    gp = _SO_PREC.get(type(g))
    if isinstance(g, (SExists, SForall, SExistsSet, SForallSet)):
        return f"({text})"
    if gp is not None and (gp < prec or (gp == prec and wrap_equal)):
        return f"({text})"
    return text


_K_PREC = {KOr: 2, KAnd: 3}


def format_k(f) -> str:
    if isinstance(f, KEq):
        return f"{format_term(f.left)} = {format_term(f.right)}"
    if isinstance(f, KPred):
        return f"K({format_term(f.term)})"
    if isinstance(f, Coded):
        return f"({f.code})_{_index_term(f.term)} != 0"
    if isinstance(f, KNot):
        return f"!({format_k(f.arg)})"
    if type(f) in _K_PREC:
        prec = _K_PREC[type(f)]
        op = "|" if isinstance(f, KOr) else "&"
        return f"{_k_operand(f.left, prec, False)} {op} {_k_operand(f.right, prec, True)}"
    return f"E {f.var}. {_quant_body(format_k(f.body), f.body)}"


def _index_term(t):
    text = format_term(t)
    return text if isinstance(t, (Num, Var)) else f"({text})"


def _k_operand(g, prec, wrap_equal):
    text = format_k(g)
    gp = _K_PREC.get(type(g))
    if isinstance(g, KExists):
        return f"({text})"
    if gp is not None and (gp < prec or (gp == prec and wrap_equal)):
        return f"({text})"
    return text


# translation

def _fresh_number_var(taken: set) -> str:
    for k in itertools.count():
        name = f"z{k}"
        if name not in taken:
            return name


def desugar(f, taken: set | None = None):
    """Rewrite into ``=``, ``in``, ``!``, ``|``, ``E`` and ``EX`` only.

    Set equality becomes ``A z. (z in X -> z in Y) & (z in Y -> z in X)``
    with ``z`` a number variable not in ``taken``, then is desugared too.
    """
    if taken is None:
        taken = so_variables(f)
    if isinstance(f, (TermEq, Member)):
        return f
    if isinstance(f, SetEq):
        z = _fresh_number_var(taken)
        taken.add(z)
        a, b = Member(Var(z), f.left), Member(Var(z), f.right)
        return desugar(SForall(z, SAnd(SImplies(a, b), SImplies(b, a))), taken)
    if isinstance(f, SNot):
        return SNot(desugar(f.arg, taken))
    if isinstance(f, SOr):
        return SOr(desugar(f.left, taken), desugar(f.right, taken))
    if isinstance(f, SAnd):
        return SNot(SOr(SNot(desugar(f.left, taken)), SNot(desugar(f.right, taken))))
    if isinstance(f, SImplies):
        return SOr(SNot(desugar(f.left, taken)), desugar(f.right, taken))
    if isinstance(f, SExists):
        return SExists(f.var, desugar(f.body, taken))
    if isinstance(f, SExistsSet):
        return SExistsSet(f.var, desugar(f.body, taken))
    if isinstance(f, SForall):
        return SNot(SExists(f.var, SNot(desugar(f.body, taken))))
    if isinstance(f, SForallSet):
        return SNot(SExistsSet(f.var, SNot(desugar(f.body, taken))))
    raise TypeError(f"not a second-order formula: {f!r}")


def code_var(set_var: str) -> str:
    return RESERVED_PREFIX + set_var


def k_translate(theta):
    """Translate ``theta`` clause by clause, after desugaring."""
    clash = sorted(v for v in so_variables(theta) if v.startswith(RESERVED_PREFIX))
    if clash:
        raise NamespaceCollision(f"variables {clash} use the reserved prefix {RESERVED_PREFIX!r}")
    return _translate(desugar(theta))


def _translate(f):
    if isinstance(f, TermEq):
        return KEq(f.left, f.right)
    if isinstance(f, Member):
        return KAnd(KPred(f.term), Coded(code_var(f.set_var), f.term))
    if isinstance(f, SNot):
        return KNot(_translate(f.arg))
    if isinstance(f, SOr):
        return KOr(_translate(f.left), _translate(f.right))
    if isinstance(f, SExists):
        return KExists(f.var, KAnd(KPred(Var(f.var)), _translate(f.body)))
    if isinstance(f, SExistsSet):
        return KExists(code_var(f.var), _translate(f.body))
    raise TypeError(f"not desugared: {f!r}")


def absorb_guards(f):
    """Drop a ``K(t)`` conjunct already implied by an enclosing ``K(t) & ...``.

    ``K(n) & (K(n) & psi)`` becomes ``K(n) & psi``; the result is equivalent.
    """
    if isinstance(f, KAnd):
        left, right = absorb_guards(f.left), absorb_guards(f.right)
        if isinstance(left, KPred) and isinstance(right, KAnd) and right.left == left:
            return right
        return KAnd(left, right)
    if isinstance(f, KOr):
        return KOr(absorb_guards(f.left), absorb_guards(f.right))
    if isinstance(f, KNot):
        return KNot(absorb_guards(f.arg))
    if isinstance(f, KExists):
        return KExists(f.var, absorb_guards(f.body))
    return f


def k_variables(f) -> set:
    if isinstance(f, KEq):
        return _term_vars(f.left) | _term_vars(f.right)
    if isinstance(f, KPred):
        return _term_vars(f.term)
    if isinstance(f, Coded):
        return {f.code} | _term_vars(f.term)
    if isinstance(f, KNot):
        return k_variables(f.arg)
    if isinstance(f, (KOr, KAnd)):
        return k_variables(f.left) | k_variables(f.right)
    return {f.var} | k_variables(f.body)
