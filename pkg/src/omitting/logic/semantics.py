"""Finite models and Tarskian evaluation by exhaustive quantifier expansion.

This is the slow, obviously-correct side of the decision procedure: nothing
here knows about regions or normal forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .syntax import (
    And, Atom, Const, CountExists, Eq, Exists, Forall, Formula, Implies, Not, Or, Pred,
)


@dataclass(frozen=True)
class FiniteModel:
    domain_size: int
    extensions: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.domain_size < 0:
            raise ValueError("domain size must be >= 0")
        ext = {}
        for pred, members in self.extensions.items():
            members = frozenset(members)
            if any(not 0 <= a < self.domain_size for a in members):
                raise ValueError(f"extension of {pred} leaves the domain")
            ext[pred] = members
        object.__setattr__(self, "extensions", ext)

    def __hash__(self):
        return hash((self.domain_size, frozenset(self.extensions.items())))

    def holds(self, pred: Pred, a: int) -> bool:
        try:
            return a in self.extensions[pred]
        except KeyError:
            raise KeyError(f"model has no interpretation for {pred}") from None


def evaluate(m: FiniteModel, f: Formula, env: dict | None = None) -> bool:
    """Truth of ``f`` in ``m`` under the variable assignment ``env``."""
    env = env or {}
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Atom):
        return m.holds(f.pred, env[f.var])
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Not):
        return not evaluate(m, f.arg, env)
    if isinstance(f, And):
        return evaluate(m, f.left, env) and evaluate(m, f.right, env)
    if isinstance(f, Or):
        return evaluate(m, f.left, env) or evaluate(m, f.right, env)
    if isinstance(f, Implies):
        return (not evaluate(m, f.left, env)) or evaluate(m, f.right, env)
    domain = range(m.domain_size)
    if isinstance(f, Exists):
        return any(evaluate(m, f.body, {**env, f.var: a}) for a in domain)
    if isinstance(f, Forall):
        return all(evaluate(m, f.body, {**env, f.var: a}) for a in domain)
    if isinstance(f, CountExists):
        count = 0
        for a in domain:
            if evaluate(m, f.body, {**env, f.var: a}):
                count += 1
                if count >= f.n:
                    return True
        return False
    raise TypeError(f"not a formula: {f!r}")


def compile_formula(f: Formula):
    """Compile ``f`` to a closure ``(model, env) -> bool`` with the same semantics
    as :func:`evaluate`; used where exhaustive enumeration needs speed."""
    if isinstance(f, Const):
        v = f.value
        return lambda m, env: v
    if isinstance(f, Atom):
        pred, var = f.pred, f.var
        return lambda m, env: env[var] in m.extensions[pred]
    if isinstance(f, Eq):
        l, r = f.left, f.right
        return lambda m, env: env[l] == env[r]
    if isinstance(f, Not):
        a = compile_formula(f.arg)
        return lambda m, env: not a(m, env)
    if isinstance(f, (And, Or, Implies)):
        a, b = compile_formula(f.left), compile_formula(f.right)
        if isinstance(f, And):
            return lambda m, env: a(m, env) and b(m, env)
        if isinstance(f, Or):
            return lambda m, env: a(m, env) or b(m, env)
        return lambda m, env: (not a(m, env)) or b(m, env)
    body = compile_formula(f.body)
    var = f.var
    if isinstance(f, Exists):
        def ex(m, env):
            for a in range(m.domain_size):
                env[var] = a
                if body(m, env):
                    return True
            return False
        return _scoped(ex, var)
    if isinstance(f, Forall):
        def fa(m, env):
            for a in range(m.domain_size):
                env[var] = a
                if not body(m, env):
                    return False
            return True
        return _scoped(fa, var)
    n = f.n

    def cnt(m, env):
        k = 0
        for a in range(m.domain_size):
            env[var] = a
            if body(m, env):
                k += 1
                if k >= n:
                    return True
        return False
    return _scoped(cnt, var)


def _scoped(fn, var):
    def run(m, env):
        saved = env.get(var, _MISSING)
        try:
            return fn(m, env)
        finally:
            if saved is _MISSING:
                env.pop(var, None)
            else:
                env[var] = saved
    return run


_MISSING = object()


def expand_counting(f: Formula) -> Formula:
    """Replace every ``E>=n x. phi`` by its expansion with ``n`` distinct
    witnesses ``E x0 ... E x(n-1). /\\ x_k != x_j & phi(x_j)``."""
    from .syntax import conj, rename_free
    counter = itertools.count()

    def go(g):
        if isinstance(g, (Const, Atom, Eq)):
            return g
        if isinstance(g, Not):
            return Not(go(g.arg))
        if isinstance(g, (And, Or, Implies)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, CountExists):
            body = go(g.body)
            names = [f"_c{next(counter)}" for _ in range(g.n)]
            parts = [rename_free(body, g.var, v) for v in names]
            for j, a in enumerate(names):
                for b in names[j + 1:]:
                    parts.append(Not(Eq(a, b)))
            out = conj(parts)
            for v in reversed(names):
                out = Exists(v, out)
            return out
        return type(g)(g.var, go(g.body))

    return go(f)


def models_by_counts(preds, max_size: int):
    """Every model over ``preds`` with at most ``max_size`` elements, up to
    isomorphism: one model per assignment of element counts to regions."""
    preds = list(preds)
    regions = list(itertools.product((False, True), repeat=len(preds)))
    for size in range(max_size + 1):
        for counts in _compositions(size, len(regions)):
            ext = {p: set() for p in preds}
            a = 0
            for region, c in zip(regions, counts):
                for _ in range(c):
                    for p, inside in zip(preds, region):
                        if inside:
                            ext[p].add(a)
                    a += 1
            yield FiniteModel(size, ext)


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
