"""Abstract syntax for monadic first-order logic with equality and counting.

Formulas are immutable, hashable dataclasses, so structurally equal formulas
compare equal and can key caches.  Predicate symbols carry a family name and
an index: ``None`` for plain symbols, an int for the ``U_i``/``Q_i`` style
families and a tuple path for the tree-indexed ``P<s>`` family.  Inside a
schema template an index (or a path entry) may also be a metavariable name.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

Index = Union[None, int, str, tuple]


@dataclass(frozen=True, order=True)
class Pred:
    family: str
    index: Index = None

    def __str__(self):
        idx = self.index
        if idx is None:
            return self.family
        if isinstance(idx, tuple):
            return f"{self.family}<{','.join(str(i) for i in idx)}>"
        return f"{self.family}_{idx}"

    def sort_key(self):
        idx = self.index
        if idx is None:
            return (self.family, 0, ())
        if isinstance(idx, tuple):
            return (self.family, 2, tuple((0, e) if isinstance(e, int) else (1, e) for e in idx))
        return (self.family, 1, ((0, idx) if isinstance(idx, int) else (1, idx),))


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        from .parser import format_formula
        return format_formula(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Atom(Formula):
    pred: Pred
    var: str


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class CountExists(Formula):
    """At least ``n`` distinct witnesses for ``body``."""

    n: int
    var: str
    body: Formula

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("counting threshold must be >= 1")


TRUE = Const(True)
FALSE = Const(False)

BINARY = (And, Or, Implies)
QUANTIFIERS = (Exists, Forall, CountExists)


def conj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, BINARY):
            stack.extend((g.right, g.left))
        elif isinstance(g, QUANTIFIERS):
            stack.append(g.body)


def predicates(f: Formula) -> set:
    return {g.pred for g in subformulas(f) if isinstance(g, Atom)}


def free_vars(f: Formula) -> frozenset:
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Atom):
        return frozenset((f.var,))
    if isinstance(f, Eq):
        return frozenset((f.left, f.right))
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body) - {f.var}


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def quantifier_weight(f: Formula) -> int:
    """Sum of quantifier thresholds: 1 per plain quantifier, ``n`` per counting one."""
    total = 0
    for g in subformulas(f):
        if isinstance(g, CountExists):
            total += g.n
        elif isinstance(g, (Exists, Forall)):
            total += 1
    return total


def map_atoms(f: Formula, fn) -> Formula:
    """Rebuild ``f`` with every ``Atom`` replaced by ``fn(atom)``."""
    if isinstance(f, Atom):
        return fn(f)
    if isinstance(f, (Const, Eq)):
        return f
    if isinstance(f, Not):
        return Not(map_atoms(f.arg, fn))
    if isinstance(f, BINARY):
        return type(f)(map_atoms(f.left, fn), map_atoms(f.right, fn))
    if isinstance(f, CountExists):
        return CountExists(f.n, f.var, map_atoms(f.body, fn))
    return type(f)(f.var, map_atoms(f.body, fn))


def rename_free(f: Formula, old: str, new: str) -> Formula:
    """Substitute variable ``new`` for free occurrences of ``old``.

    ``new`` must not be captured by a binder inside ``f``; callers pick fresh
    names.
    """
    if isinstance(f, Const):
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, new) if f.var == old else f
    if isinstance(f, Eq):
        return Eq(new if f.left == old else f.left, new if f.right == old else f.right)
    if isinstance(f, Not):
        return Not(rename_free(f.arg, old, new))
    if isinstance(f, BINARY):
        return type(f)(rename_free(f.left, old, new), rename_free(f.right, old, new))
    if f.var == old:
        return f
    if f.var == new:
        raise ValueError(f"variable {new!r} would be captured")
    if isinstance(f, CountExists):
        return CountExists(f.n, f.var, rename_free(f.body, old, new))
    return type(f)(f.var, rename_free(f.body, old, new))


def simplify(f: Formula) -> Formula:
    """Constant folding plus ``x = x`` and double negation."""
    if isinstance(f, (Const, Atom)):
        return f
    if isinstance(f, Eq):
        return TRUE if f.left == f.right else f
    if isinstance(f, Not):
        a = simplify(f.arg)
        if isinstance(a, Const):
            return Const(not a.value)
        if isinstance(a, Not):
            return a.arg
        return Not(a)
    if isinstance(f, BINARY):
        a, b = simplify(f.left), simplify(f.right)
        if isinstance(f, Implies):
            if a == FALSE or b == TRUE:
                return TRUE
            if a == TRUE:
                return b
            if b == FALSE:
                return simplify(Not(a))
            return Implies(a, b)
        absorbing, neutral = (FALSE, TRUE) if isinstance(f, And) else (TRUE, FALSE)
        if a == absorbing or b == absorbing:
            return absorbing
        if a == neutral:
            return b
        if b == neutral:
            return a
        if a == b:
            return a
        return type(f)(a, b)
    body = simplify(f.body)
    if isinstance(body, Const):
        if isinstance(f, Forall):
            # the empty domain is allowed, so only a true body folds
            return TRUE if body.value else Forall(f.var, body)
        return FALSE if not body.value else type(f)(*_rebuild_args(f, body))
    return type(f)(*_rebuild_args(f, body))


def _rebuild_args(f, body):
    if isinstance(f, CountExists):
        return (f.n, f.var, body)
    return (f.var, body)
