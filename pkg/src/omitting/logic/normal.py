"""Quantifier elimination for monadic logic with equality.

Every sentence is rewritten into a boolean combination of *counting atoms*
``E>=m v. beta(v)`` where ``beta`` is quantifier-free and mentions only the
canonical variable ``v``.  Elimination runs innermost first.  For
``E>=n x. psi(x, y1..yk)`` the witnesses are split into those equal to some
``y`` and the rest; the equality pattern of the ``y``'s is fixed by a case
split over set partitions and the remaining parameter atoms by Shannon
expansion, after which the count of non-``y`` witnesses is a plain region
count minus the ``y``'s that fall into it.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .syntax import (
    FALSE, TRUE, And, Atom, Const, CountExists, Eq, Exists, Forall, Formula, Implies, Not, Or,
    conj, disj, free_vars, simplify,
)

CANON = "v"


def is_counting_atom(f: Formula) -> bool:
    return isinstance(f, CountExists) and not free_vars(f)


@lru_cache(maxsize=200_000)
def normal_form(f: Formula) -> Formula:
    """Equivalent boolean combination of closed counting atoms, equalities and
    atoms over the free variables of ``f``."""
    if isinstance(f, (Const, Atom)):
        return f
    if isinstance(f, Eq):
        return TRUE if f.left == f.right else f
    if isinstance(f, Not):
        return simplify(Not(normal_form(f.arg)))
    if isinstance(f, (And, Or, Implies)):
        return simplify(type(f)(normal_form(f.left), normal_form(f.right)))
    if isinstance(f, Forall):
        return simplify(Not(_eliminate(1, f.var, simplify(Not(normal_form(f.body))))))
    if isinstance(f, Exists):
        return _eliminate(1, f.var, normal_form(f.body))
    return _eliminate(f.n, f.var, normal_form(f.body))


def count_atom(beta: Formula, var: str, n: int) -> Formula:
    if n <= 0:
        return TRUE
    beta = simplify(_rename(beta, var, CANON))
    if beta == FALSE:
        return FALSE
    return CountExists(n, CANON, beta)


def _rename(f, old, new):
    if old == new:
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, new) if f.var == old else f
    if isinstance(f, Eq):
        return Eq(new if f.left == old else f.left, new if f.right == old else f.right)
    if isinstance(f, Not):
        return Not(_rename(f.arg, old, new))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_rename(f.left, old, new), _rename(f.right, old, new))
    return f  # constants and closed counting atoms


def _resolve(f, rename, decide):
    """Rename variables, then settle equalities ``decide`` has an answer for."""
    if isinstance(f, Atom):
        return Atom(f.pred, rename.get(f.var, f.var))
    if isinstance(f, Eq):
        a, b = rename.get(f.left, f.left), rename.get(f.right, f.right)
        if a == b:
            return TRUE
        decided = decide(a, b)
        return Eq(a, b) if decided is None else Const(decided)
    if isinstance(f, Not):
        return Not(_resolve(f.arg, rename, decide))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_resolve(f.left, rename, decide), _resolve(f.right, rename, decide))
    return f


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _parameter_atoms(f, x):
    out = []
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or, Implies)):
            stack.extend((g.right, g.left))
        elif isinstance(g, Atom):
            if g.var != x and g not in seen:
                seen.add(g)
                out.append(g)
        elif isinstance(g, Eq):
            if x not in (g.left, g.right) and g not in seen:
                seen.add(g)
                out.append(g)
        elif isinstance(g, CountExists):
            if g not in seen:
                seen.add(g)
                out.append(g)
    return out


def _assign(f, atom, value):
    if f == atom:
        return Const(value)
    if isinstance(f, Not):
        return Not(_assign(f.arg, atom, value))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_assign(f.left, atom, value), _assign(f.right, atom, value))
    return f


def _shannon(f, x):
    """Split ``f`` into ``[(guard, beta)]`` with guards over parameter atoms,
    mutually exclusive and exhaustive, and ``beta`` mentioning only ``x``."""
    f = simplify(f)
    params = _parameter_atoms(f, x)
    if not params:
        return [(TRUE, f)]
    atom = params[0]
    out = []
    for value in (True, False):
        lit = atom if value else Not(atom)
        for guard, beta in _shannon(_assign(f, atom, value), x):
            out.append((simplify(And(lit, guard)), beta))
    return out


def _eliminate(n: int, x: str, psi: Formula) -> Formula:
    psi = simplify(psi)
    if x not in free_vars(psi):
        return simplify(And(psi, count_atom(TRUE, x, n)))
    # only variables compared with x need the witness split
    ys = sorted(_compared_with(psi, x))
    result = []
    for part in _partitions(ys):
        reps = [block[0] for block in part]
        rename = {y: block[0] for block in part for y in block}
        distinct = set(reps)

        def reps_differ(a, b):
            return False if a in distinct and b in distinct else None

        psi_p = simplify(_resolve(psi, rename, reps_differ))
        pattern = []
        for block in part:
            pattern += [Eq(block[0], y) for y in block[1:]]
        for a, b in combinations(reps, 2):
            pattern.append(Not(Eq(a, b)))

        psi_off = simplify(_resolve(psi_p, {}, lambda a, b: False if x in (a, b) else None))
        sigma = {r: simplify(_resolve(psi_p, {x: r}, reps_differ)) for r in reps}

        cases = []
        for guard, beta in _shannon(psi_off, x):
            at_rep = {r: simplify(_rename(beta, x, r)) for r in reps}
            branches = []
            for in_beta in _subsets(reps):
                for in_psi in _subsets(reps):
                    lits = [at_rep[r] if r in in_beta else Not(at_rep[r]) for r in reps]
                    lits += [sigma[r] if r in in_psi else Not(sigma[r]) for r in reps]
                    need = n + len(in_beta) - len(in_psi)
                    branches.append(conj(lits + [count_atom(beta, x, need)]))
            cases.append(And(guard, disj(branches)))
        result.append(conj(pattern + [disj(cases)]))
    return simplify(disj(result))


def _compared_with(f, x):
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Eq):
            if g.left == x and g.right != x:
                out.add(g.right)
            elif g.right == x and g.left != x:
                out.add(g.left)
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or, Implies)):
            stack.extend((g.left, g.right))
    return out


def _subsets(items):
    for k in range(len(items) + 1):
        for combo in combinations(items, k):
            yield set(combo)


def counting_atoms(f: Formula) -> list:
    """Distinct counting atoms of a normal form, in first-occurrence order."""
    out, seen = [], set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, CountExists):
            if g not in seen:
                seen.add(g)
                out.append(g)
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or, Implies)):
            stack.extend((g.right, g.left))
    return out
