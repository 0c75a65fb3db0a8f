"""Region profiles and the decision procedure for the monadic fragment.

A *region* is a set of predicate symbols, read as "the elements lying in
exactly these predicates"; a :class:`RegionProfile` gives each region a
cardinality in ``0..K`` or infinity.  Truth of a sentence of quantifier
weight ``w`` depends only on region cardinalities truncated at ``w``, so
profiles are complete descriptions of models for the queries we issue.

:func:`sat_profile` looks for a profile by normalising every sentence into
counting atoms (see :mod:`.normal`) and handing the result to a SAT solver.
The model is a bounded set of *slots*, each an element whose predicate
memberships are boolean variables.  A counting atom that can be needed true
gets as many slots as its threshold, which suffices: dropping every element
that is not a witness of a true atom keeps true atoms true and cannot make a
false atom true.  Each infinity constraint gets one extra slot standing for
an infinite region, which counts as arbitrarily many witnesses.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from pysat.solvers import Solver

from .normal import counting_atoms, normal_form
from .semantics import FiniteModel
from .syntax import (
    And, Atom, Const, CountExists, Formula, Implies, Not, Or, Pred, predicates,
    quantifier_weight, simplify,
)

INF = math.inf


@dataclass(frozen=True)
class Infinite:
    """Profile constraint: the set defined by ``body`` (free in ``var``)
    contains an infinite region."""

    body: Formula
    var: str = "x"

    def __str__(self):
        from .parser import format_formula
        return f"infinite {{{self.var} : {format_formula(self.body)}}}"


@dataclass(frozen=True)
class RegionProfile:
    signature: tuple
    counts: dict = field(default_factory=dict)
    bound: int = 1

    def __post_init__(self):
        sig = set(self.signature)
        clean = {}
        for region, c in self.counts.items():
            region = frozenset(region)
            if not region <= sig:
                raise ValueError(f"region {set(region)} leaves the signature")
            if c != INF and (not isinstance(c, int) or c < 0):
                raise ValueError(f"bad cardinality {c!r}")
            if c:
                clean[region] = c
        object.__setattr__(self, "signature", tuple(sorted(sig, key=Pred.sort_key)))
        object.__setattr__(self, "counts", clean)

    def __getitem__(self, region):
        return self.counts.get(frozenset(region), 0)

    def __hash__(self):
        return hash((self.signature, frozenset(self.counts.items()), self.bound))

    def regions(self):
        """Every region of the signature with its cardinality, zeros included."""
        sig = self.signature
        for bits in itertools.product((False, True), repeat=len(sig)):
            region = frozenset(p for p, b in zip(sig, bits) if b)
            yield region, self[region]

    def truncated(self, w: int) -> dict:
        return {r: min(c, w) for r, c in self.counts.items()}


def profile_of_model(m: FiniteModel, signature=None) -> RegionProfile:
    sig = tuple(signature if signature is not None else m.extensions)
    counts: dict = {}
    for a in range(m.domain_size):
        region = frozenset(p for p in sig if a in m.extensions.get(p, ()))
        counts[region] = counts.get(region, 0) + 1
    return RegionProfile(sig, counts, bound=max(1, m.domain_size))


def materialize(profile: RegionProfile, weight_bound: int | None = None) -> FiniteModel:
    """A finite model with the profile's region counts, infinite regions
    getting ``bound + 1`` elements."""
    if weight_bound is not None and weight_bound > profile.bound:
        raise ValueError("weight bound exceeds the profile's truncation bound")
    ext = {p: set() for p in profile.signature}
    a = 0
    for region in sorted(profile.counts, key=lambda r: sorted(map(Pred.sort_key, r))):
        c = profile.counts[region]
        size = profile.bound + 1 if c == INF else c
        for _ in range(size):
            for p in region:
                ext[p].add(a)
            a += 1
    return FiniteModel(a, ext)


def _prop_value(beta: Formula, region: frozenset) -> bool:
    if isinstance(beta, Const):
        return beta.value
    if isinstance(beta, Atom):
        return beta.pred in region
    if isinstance(beta, Not):
        return not _prop_value(beta.arg, region)
    if isinstance(beta, And):
        return _prop_value(beta.left, region) and _prop_value(beta.right, region)
    if isinstance(beta, Or):
        return _prop_value(beta.left, region) or _prop_value(beta.right, region)
    if isinstance(beta, Implies):
        return (not _prop_value(beta.left, region)) or _prop_value(beta.right, region)
    raise TypeError(f"not propositional: {beta!r}")


def region_count(profile: RegionProfile, beta: Formula):
    return sum((c for r, c in profile.counts.items() if _prop_value(beta, r)), 0)


def profile_truth(profile: RegionProfile, sentence: Formula) -> bool:
    """Truth of ``sentence`` in any model with this profile, read off its
    counting normal form."""
    def value(g):
        if isinstance(g, Const):
            return g.value
        if isinstance(g, CountExists):
            return region_count(profile, g.body) >= g.n
        if isinstance(g, Not):
            return not value(g.arg)
        if isinstance(g, And):
            return value(g.left) and value(g.right)
        if isinstance(g, Or):
            return value(g.left) or value(g.right)
        if isinstance(g, Implies):
            return (not value(g.left)) or value(g.right)
        raise TypeError(f"unexpected node in normal form: {g!r}")
    return value(normal_form(sentence))


def constraint_holds(profile: RegionProfile, c: Infinite) -> bool:
    return any(n == INF and _prop_value(_canon(c), r) for r, n in profile.counts.items())


def _canon(c: Infinite) -> Formula:
    from .normal import CANON, _rename
    return _rename(c.body, c.var, CANON)


def truncation_bound(sentences) -> int:
    return max(1, sum(quantifier_weight(s) for s in sentences))


class _Encoder:
    def __init__(self):
        self.top = 0
        self.clauses = []
        self.true = self.new()
        self.clauses.append([self.true])

    def new(self):
        self.top += 1
        return self.top

    def AND(self, lits):
        lits = [l for l in lits if l != self.true]
        if any(l == -self.true for l in lits):
            return -self.true
        if not lits:
            return self.true
        if len(lits) == 1:
            return lits[0]
        g = self.new()
        for l in lits:
            self.clauses.append([-g, l])
        self.clauses.append([g] + [-l for l in lits])
        return g

    def OR(self, lits):
        return -self.AND([-l for l in lits])

    def at_least(self, lits, m):
        """Literal equivalent to "at least ``m`` of ``lits`` are true"."""
        if m <= 0:
            return self.true
        if m > len(lits):
            return -self.true
        if m == 1:
            return self.OR(lits)
        # sequential counter: row[j] <-> at least j+1 of the literals so far
        row = [-self.true] * m
        for l in lits:
            nxt = []
            for j in range(m):
                carry = self.AND([row[j - 1], l]) if j else l
                nxt.append(self.OR([row[j], carry]))
            row = nxt
        return row[m - 1]


def _polarities(f, pol, out):
    if isinstance(f, CountExists):
        out[f] = out.get(f, 0) | pol
    elif isinstance(f, Not):
        _polarities(f.arg, _flip(pol), out)
    elif isinstance(f, (And, Or)):
        _polarities(f.left, pol, out)
        _polarities(f.right, pol, out)
    elif isinstance(f, Implies):
        _polarities(f.left, _flip(pol), out)
        _polarities(f.right, pol, out)


def _flip(pol):
    return ((pol & 1) << 1) | ((pol & 2) >> 1)


POS, NEG = 1, 2


def sat_profile(sentences, signature=(), constraints=(), bound: int | None = None):
    """A profile satisfying every sentence and constraint, or ``None``.

    ``bound`` is the truncation bound K; it defaults to the total quantifier
    weight of ``sentences`` (at least 1).
    """
    sentences = list(sentences)
    constraints = list(constraints)
    K = truncation_bound(sentences) if bound is None else bound
    sig = set(signature)
    for s in sentences:
        sig |= predicates(s)
    for c in constraints:
        sig |= predicates(c.body)
    sig = sorted(sig, key=Pred.sort_key)

    forms = [normal_form(s) for s in sentences]
    if any(f == Const(False) for f in forms):
        return None
    pol: dict = {}
    for f in forms:
        _polarities(f, POS, pol)
    atoms = []
    for f in forms:
        for a in counting_atoms(f):
            if a not in atoms:
                atoms.append(a)

    enc = _Encoder()
    n_slots = sum(a.n for a in atoms if pol.get(a, 0) & POS)
    slot_used = [enc.new() for _ in range(n_slots)]
    slot_vars = [{p: enc.new() for p in sig} for _ in range(n_slots)]
    inf_vars = [{p: enc.new() for p in sig} for _ in constraints]
    for k in range(n_slots - 1):
        # symmetry breaking: used slots come first
        enc.clauses.append([-slot_used[k + 1], slot_used[k]])

    def prop(beta, vars_):
        if isinstance(beta, Const):
            return enc.true if beta.value else -enc.true
        if isinstance(beta, Atom):
            return vars_[beta.pred]
        if isinstance(beta, Not):
            return -prop(beta.arg, vars_)
        if isinstance(beta, And):
            return enc.AND([prop(beta.left, vars_), prop(beta.right, vars_)])
        if isinstance(beta, Or):
            return enc.OR([prop(beta.left, vars_), prop(beta.right, vars_)])
        if isinstance(beta, Implies):
            return enc.OR([-prop(beta.left, vars_), prop(beta.right, vars_)])
        raise TypeError(f"not propositional: {beta!r}")

    atom_lit = {}
    for a in atoms:
        lit = enc.new()
        atom_lit[a] = lit
        members = [enc.AND([slot_used[k], prop(a.body, slot_vars[k])]) for k in range(n_slots)]
        infinite = enc.OR([prop(a.body, iv) for iv in inf_vars])
        holds = enc.OR([infinite, enc.at_least(members, a.n)])
        p = pol.get(a, 0)
        if p & POS:
            enc.clauses.append([-lit, holds])
        if p & NEG:
            enc.clauses.append([-holds, lit])

    def skeleton(f):
        if isinstance(f, Const):
            return enc.true if f.value else -enc.true
        if isinstance(f, CountExists):
            return atom_lit[f]
        if isinstance(f, Not):
            return -skeleton(f.arg)
        if isinstance(f, And):
            return enc.AND([skeleton(f.left), skeleton(f.right)])
        if isinstance(f, Or):
            return enc.OR([skeleton(f.left), skeleton(f.right)])
        if isinstance(f, Implies):
            return enc.OR([-skeleton(f.left), skeleton(f.right)])
        raise TypeError(f"sentence did not normalise to counting atoms: {f!r}")

    for f in forms:
        enc.clauses.append([skeleton(f)])
    for c, iv in zip(constraints, inf_vars):
        enc.clauses.append([prop(_canon(c), iv)])

    with Solver(name="g4", bootstrap_with=enc.clauses) as solver:
        if not solver.solve():
            return None
        model = set(l for l in solver.get_model() if l > 0)

    counts: dict = {}
    for k in range(n_slots):
        if slot_used[k] in model:
            region = frozenset(p for p in sig if slot_vars[k][p] in model)
            counts[region] = counts.get(region, 0) + 1
    for iv in inf_vars:
        region = frozenset(p for p in sig if iv[p] in model)
        counts[region] = INF
    counts = {r: (INF if c != INF and c > K else c) for r, c in counts.items()}
    return RegionProfile(tuple(sig), counts, bound=K)


def entails(theory, sentence: Formula, constraints=(), signature=()) -> bool:
    """Whether every model of ``theory`` meeting ``constraints`` satisfies ``sentence``."""
    return sat_profile(list(theory) + [Not(sentence)], signature, constraints) is None


def sat_profile_exhaustive(sentences, signature=(), constraints=(), bound: int | None = None):
    """Literal search over all cardinality assignments in ``{0..K, inf}``.

    Exponential in the number of regions; meant for signatures of two or
    three predicates, as a cross-check of :func:`sat_profile`.
    """
    sentences = list(sentences)
    K = truncation_bound(sentences) if bound is None else bound
    sig = set(signature)
    for s in sentences:
        sig |= predicates(s)
    for c in constraints:
        sig |= predicates(c.body)
    sig = tuple(sorted(sig, key=Pred.sort_key))
    regions = [frozenset(p for p, b in zip(sig, bits) if b)
               for bits in itertools.product((False, True), repeat=len(sig))]
    values = list(range(K + 1)) + [INF]
    for combo in itertools.product(values, repeat=len(regions)):
        profile = RegionProfile(sig, dict(zip(regions, combo)), bound=K)
        if all(constraint_holds(profile, c) for c in constraints) and \
                all(profile_truth(profile, s) for s in sentences):
            return profile
    return None


__all__ = [
    "INF", "Infinite", "RegionProfile", "entails", "materialize", "profile_of_model",
    "profile_truth", "region_count", "sat_profile", "sat_profile_exhaustive",
    "truncation_bound", "simplify",
]
