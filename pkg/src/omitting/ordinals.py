"""Ordinals below epsilon-zero in Cantor normal form.

An :class:`Ordinal` is a finite, strictly decreasing sequence of terms
``(exponent, coefficient)`` standing for ``w^e1*c1 + w^e2*c2 + ...``.
Exponents are themselves ordinals, so every value is below epsilon-zero by
construction.  Only what the rest of the package needs is provided:
construction, comparison, addition, classification and the explicit
fundamental sequences used to build the canonical trees.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import total_ordering
from typing import NamedTuple


class OrdinalError(ValueError):
    pass


class OrdinalSyntaxError(OrdinalError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        previous = None
        for exponent, coefficient in self.terms:
            if not isinstance(exponent, Ordinal):
                raise OrdinalError(f"exponent {exponent!r} is not an Ordinal")
            if not isinstance(coefficient, int) or coefficient < 1:
                raise OrdinalError(f"coefficient {coefficient!r} must be a positive int")
            if previous is not None and compare(previous, exponent) <= 0:
                raise OrdinalError("exponents must be strictly decreasing")
            previous = exponent

    @classmethod
    def of(cls, n: int) -> "Ordinal":
        if n < 0:
            raise OrdinalError("ordinals are non-negative")
        return cls(((ZERO, n),)) if n else ZERO

    @classmethod
    def omega_power(cls, exponent: "Ordinal | int", coefficient: int = 1) -> "Ordinal":
        if isinstance(exponent, int):
            exponent = cls.of(exponent)
        return cls(((exponent, coefficient),))

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return all(e.is_zero() for e, _ in self.terms)

    def to_int(self) -> int:
        if not self.is_finite():
            raise OrdinalError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def __lt__(self, other):
        if not isinstance(other, Ordinal):
            return NotImplemented
        return compare(self, other) < 0

    def __add__(self, other):
        if isinstance(other, int):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return add(self, other)

    def __str__(self):
        return format_ordinal(self)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def compare(a: Ordinal, b: Ordinal) -> int:
    """Return -1, 0 or 1 as ``a`` is below, equal to or above ``b``."""
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    la, lb = len(a.terms), len(b.terms)
    return (la > lb) - (la < lb)


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    if b.is_zero():
        return a
    lead = b.terms[0][0]
    kept = []
    for e, c in a.terms:
        rel = compare(e, lead)
        if rel > 0:
            kept.append((e, c))
        elif rel == 0:
            # same leading power: coefficients merge, the rest of a is absorbed
            return Ordinal(tuple(kept) + ((lead, c + b.terms[0][1]),) + b.terms[1:])
        else:
            break
    return Ordinal(tuple(kept) + b.terms)


class Kind(enum.Enum):
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"


class Classification(NamedTuple):
    kind: Kind
    pred: Ordinal | None = None


def classify(a: Ordinal) -> Classification:
    if a.is_zero():
        return Classification(Kind.ZERO)
    exponent, coefficient = a.terms[-1]
    if not exponent.is_zero():
        return Classification(Kind.LIMIT)
    head = a.terms[:-1]
    if coefficient > 1:
        head += ((ZERO, coefficient - 1),)
    return Classification(Kind.SUCCESSOR, Ordinal(head))


def is_limit(a: Ordinal) -> bool:
    return classify(a).kind is Kind.LIMIT


def fund_seq(lam: Ordinal, i: int) -> Ordinal:
    """The i-th member of the fundamental sequence of the limit ``lam``.

    Writing ``lam = ... + w^e*n``, the last term is replaced by
    ``w^e*(n-1) + w^{e}(i)`` when ``e`` is a limit and by
    ``w^e*(n-1) + w^xi*i`` when ``e = xi + 1``.
    """
    if i < 0:
        raise OrdinalError("index must be a natural number")
    if classify(lam).kind is not Kind.LIMIT:
        raise OrdinalError(f"{lam} is not a limit ordinal")
    exponent, coefficient = lam.terms[-1]
    head = lam.terms[:-1]
    if coefficient > 1:
        head += ((exponent, coefficient - 1),)
    kind, pred = classify(exponent)
    if kind is Kind.LIMIT:
        tail = ((fund_seq(exponent, i), 1),)
    else:
        tail = ((pred, i),) if i else ()
    return Ordinal(head + tail)


def index_above(lam: Ordinal, beta: Ordinal) -> int:
    """Least ``i`` with ``fund_seq(lam, i) >= beta``; requires ``beta < lam``."""
    if classify(lam).kind is not Kind.LIMIT:
        raise OrdinalError(f"{lam} is not a limit ordinal")
    if compare(beta, lam) >= 0:
        raise OrdinalError(f"{beta} is not below {lam}")

    def reached(i):
        return compare(fund_seq(lam, i), beta) >= 0

    if reached(0):
        return 0
    # the sequence is strictly increasing, so gallop then bisect
    lo, hi = 0, 1
    while not reached(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if reached(mid):
            hi = mid
        else:
            lo = mid
    return hi


def format_ordinal(a: Ordinal) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for exponent, coefficient in a.terms:
        if exponent.is_zero():
            parts.append(str(coefficient))
            continue
        if exponent == ONE:
            text = "w"
        elif exponent.is_finite():
            text = f"w^{exponent.to_int()}"
        else:
            text = f"w^({format_ordinal(exponent)})"
        if coefficient > 1:
            text += f"*{coefficient}"
        parts.append(text)
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


def parse_ordinal(text: str) -> Ordinal:
    tokens = []
    for m in _TOKEN.finditer(text):
        if m.group(1) is not None:
            tokens.append(("nat", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append((m.group(2), None, m.start(2)))
    tokens.append(("end", None, len(text)))
    pos = 0

    def peek():
        return tokens[pos][0]

    def take(kind):
        nonlocal pos
        tok = tokens[pos]
        if tok[0] != kind:
            got = "end of input" if tok[0] == "end" else repr(tok[1] if tok[0] == "nat" else tok[0])
            raise OrdinalSyntaxError(f"expected {kind!r}, got {got}", tok[2])
        pos += 1
        return tok[1]

    def parse_sum():
        total = parse_term()
        while peek() == "+":
            take("+")
            total = add(total, parse_term())
        return total

    def parse_term():
        if peek() == "nat":
            return Ordinal.of(take("nat"))
        take("w")
        exponent = ONE
        if peek() == "^":
            take("^")
            if peek() == "(":
                take("(")
                exponent = parse_sum()
                take(")")
            else:
                exponent = Ordinal.of(take("nat"))
        coefficient = 1
        if peek() == "*":
            take("*")
            where = tokens[pos][2]
            coefficient = take("nat")
            if coefficient == 0:
                raise OrdinalSyntaxError("coefficients must be positive", where)
        return Ordinal(((exponent, coefficient),))

    result = parse_sum()
    take("end")
    return result
