"""Omitting a type by iterating the infinitary refutation rule.

A candidate ``phi(x)`` is refuted (``!E x. phi`` is added) once the current
theory proves ``A x. (phi -> q)`` for every member ``q`` of the type.  Steps
repeat until nothing new is refuted or the theory becomes inconsistent.
Candidates come from a finite pool, so every rank reported here is relative
to that pool.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .logic.parser import format_formula
from .logic.syntax import (
    And, Atom, Exists, Formula, Forall, Implies, Not, Or, Pred, conj, free_vars,
)
from .schematic import (
    Range, Schema, SchematicTheory, _fresh_nat, forall_index_entails, is_consistent,
    projection_for, support, theory_entails,
)


class ClosureError(RuntimeError):
    pass


class BudgetExhausted(ClosureError):
    pass


@dataclass(frozen=True)
class TypeSchema:
    """Either ``members`` (an explicit finite list) or every ``family_i(var)``."""
    family: str | None = None
    members: tuple = ()
    var: str = "x"

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if (self.family is None) == (not self.members):
            raise ValueError("give exactly one of a family or explicit members")
        for m in self.members:
            if free_vars(m) - {self.var}:
                raise ValueError(f"type member {format_formula(m)} has stray free variables")

    def member(self, i: int) -> Formula:
        if self.family is not None:
            return Atom(Pred(self.family, i), self.var)
        return self.members[i]


@dataclass(frozen=True)
class FamilyCandidate:
    """The formulas ``family_j(var)`` for every ``j``, refuted all at once."""
    family: str
    var: str = "x"

    def __str__(self):
        return f"{self.family}_*({self.var})"

    def member(self, j: int) -> Formula:
        return Atom(Pred(self.family, j), self.var)

    def refutation(self) -> Schema:
        body = Not(Exists(self.var, Atom(Pred(self.family, "j"), self.var)))
        return Schema(body, Range.ALL, (("j", "nat"),))


def candidate_label(c) -> str:
    return str(c) if isinstance(c, FamilyCandidate) else format_formula(c)


def refutation(c):
    if isinstance(c, FamilyCandidate):
        return c.refutation()
    return Not(Exists(_var_of(c), c))


def _var_of(phi: Formula) -> str:
    return min(free_vars(phi), default="x")


def _members(theory: SchematicTheory, c) -> list:
    if not isinstance(c, FamilyCandidate):
        return [c]
    sig = support(theory)
    listed = sorted(i for i in sig.get(c.family, ()) if isinstance(i, int))
    return [c.member(j) for j in listed + [_fresh_nat(theory, sig)]]


def p_rule_applies(theory: SchematicTheory, c, ptype: TypeSchema, fresh_offset: int = 0) -> bool:
    """Whether the theory proves that ``c`` implies every member of ``ptype``."""
    if isinstance(c, FamilyCandidate):
        return all(p_rule_applies(theory, m, ptype, fresh_offset) for m in _members(theory, c))
    if ptype.family is not None:
        return forall_index_entails(theory, c, ptype.family, fresh_offset=fresh_offset)
    x = ptype.var
    goal = Forall(x, Implies(c, conj(ptype.members)))
    extras = [Exists(x, c)] + [Exists(x, m) for m in ptype.members]
    return projection_for(theory, extras).entails(goal)


def extend_with(theory: SchematicTheory, refutations) -> SchematicTheory:
    sentences = [r for r in refutations if isinstance(r, Formula)]
    schemas = [r for r in refutations if isinstance(r, Schema)]
    return theory.extend(sentences, schemas)


@dataclass(frozen=True)
class ClosureState:
    base: SchematicTheory
    ptype: TypeSchema
    pool: tuple
    ledger: tuple = ()        # ((candidate, entry step), ...) in entry order
    step: int = 0
    fixpoint_reached: bool = False
    inconsistent_at: int | None = None
    verdicts: tuple = field(default=())  # consistency after each step

    @classmethod
    def start(cls, base, ptype, pool) -> "ClosureState":
        return cls(base, ptype, tuple(pool))

    @property
    def derived(self) -> tuple:
        return tuple(refutation(c) for c, _ in self.ledger)

    @property
    def theory(self) -> SchematicTheory:
        return extend_with(self.base, self.derived)

    @property
    def ledger_map(self) -> dict:
        return dict(self.ledger)

    def entry_step(self, c) -> int | None:
        return self.ledger_map.get(c)

    @property
    def consistent(self) -> bool:
        return self.inconsistent_at is None

    @property
    def fixpoint_step(self) -> int | None:
        """Least step after which nothing changes; ``None`` while still running."""
        if self.inconsistent_at is not None:
            return self.inconsistent_at
        if self.fixpoint_reached:
            return max((s for _, s in self.ledger), default=0)
        return None

    rank = fixpoint_step

    @property
    def exhausted(self) -> bool:
        return not self.fixpoint_reached and self.inconsistent_at is None


def p_operator(state: ClosureState) -> list:
    """Pool candidates not yet refuted to which the rule now applies."""
    if state.fixpoint_reached:
        return []
    theory = state.theory
    done = state.ledger_map
    return [c for c in state.pool if c not in done and p_rule_applies(theory, c, state.ptype)]


def closure_step(state: ClosureState) -> ClosureState:
    if state.fixpoint_reached or state.inconsistent_at is not None:
        raise ClosureError("the closure has already stopped")
    new = p_operator(state)
    step = state.step + 1
    if not new:
        return replace(state, step=step, fixpoint_reached=True)
    ledger = state.ledger + tuple((c, step) for c in new)
    nxt = replace(state, step=step, ledger=ledger)
    ok = is_consistent(nxt.theory)
    return replace(nxt, verdicts=state.verdicts + ((step, ok),),
                   inconsistent_at=None if ok else step)


def iterate(theory: SchematicTheory, ptype: TypeSchema, pool, max_steps: int = 50) -> ClosureState:
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    state = ClosureState.start(theory, ptype, pool)
    if not is_consistent(theory):
        return replace(state, inconsistent_at=0, verdicts=((0, False),))
    while state.step < max_steps and not state.fixpoint_reached and state.inconsistent_at is None:
        state = closure_step(state)
    return state


def is_isolated(theory: SchematicTheory, ptype: TypeSchema, pool) -> Formula | None:
    for c in pool:
        for phi in _members(theory, c):
            if is_consistent(theory.extend([Exists(_var_of(phi), phi)])) and \
                    p_rule_applies(theory, phi, ptype):
                return phi
    return None


def is_strongly_isolated(theory: SchematicTheory, ptype: TypeSchema, pool) -> Formula | None:
    pool = list(pool)
    if not is_consistent(theory):
        return _members(theory, pool[0])[0] if pool else None
    for c in pool:
        for phi in _members(theory, c):
            if theory_entails(theory, Exists(_var_of(phi), phi)) and p_rule_applies(theory, phi, ptype):
                return phi
    return None


def fixpoint_entails(state: ClosureState, sentence: Formula) -> bool:
    if state.inconsistent_at is not None:
        return True
    return theory_entails(state.theory, sentence)


def deduction_check(theory: SchematicTheory, phi: Formula, sigma: Formula, ptype: TypeSchema,
                    pool, max_steps: int = 20) -> tuple:
    """``(T* |= phi -> sigma, (T + phi)* |= sigma)`` where ``*`` is the fixpoint.

    Both runs use the pool extended by ``phi & psi`` for each formula ``psi``
    in it, so that refutations available under the hypothesis ``phi`` have a
    counterpart in the run without it.
    """
    pool = list(pool)
    pool = pool + [And(phi, c) for c in pool if isinstance(c, Formula)]
    left_state = iterate(theory, ptype, pool, max_steps)
    right_state = iterate(theory.extend([phi]), ptype, pool, max_steps)
    if left_state.exhausted or right_state.exhausted:
        raise BudgetExhausted(f"no fixpoint within {max_steps} steps")
    return (fixpoint_entails(left_state, Implies(phi, sigma)),
            fixpoint_entails(right_state, sigma))


def disjunction_applies(state: ClosureState, a: Formula, b: Formula) -> bool:
    return p_rule_applies(state.theory, Or(a, b), state.ptype)
