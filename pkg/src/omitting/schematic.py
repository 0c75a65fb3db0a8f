"""Theories with infinitely many axioms, given by index-parameterised schemas.

A :class:`SchematicTheory` has finitely many concrete sentences and finitely
many :class:`Schema` templates whose metavariables range over naturals or tree
paths.  Entailment questions over a finite signature are answered by
:func:`project`, which returns a finite theory over that signature together
with profile constraints.

Projection is exact, not heuristic.  Every instance whose symbols all lie in
the signature is kept.  An instance mentioning a symbol outside it is rewritten
by interpreting that symbol canonically: ``Full`` members as the whole
domain, ``Core`` members as the set of elements lying in every listed member
of the core family, and members the theory itself proves empty as nothing.
Rewrites that only use provably-empty symbols are consequences of the theory
and are kept.  Any other rewrite is an obligation on the finite theory: it
has to be entailed, otherwise the canonical expansion could fail and
:class:`ProjectionError` is raised.  When every obligation holds, each model
of the finite theory expands to a model of the whole theory.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .logic.parser import format_formula, parse_formula
from .logic.solver import Infinite, entails, sat_profile
from .logic.syntax import (
    TRUE, FALSE, Atom, Exists, Forall, Formula, Implies, Not, Pred, conj, map_atoms, predicates,
    simplify,
)
from .trees import FiniteTree


class SchemaError(ValueError):
    pass


class ProjectionError(ValueError):
    pass


class Tail(enum.Enum):
    FULL = "full"
    CORE = "core"
    ABSENT = "absent"


class Range(enum.Enum):
    ALL = "all"
    CHILD = "child"
    TERMINATING = "terminating"
    NOT_IN_TREE = "not_in_tree"


TREE_RANGES = (Range.CHILD, Range.TERMINATING, Range.NOT_IN_TREE)


@dataclass(frozen=True)
class FamilySpec:
    name: str
    index: str = "nat"  # "nat", "path" or "none"
    tail: Tail = Tail.FULL

    def __post_init__(self):
        if self.index not in ("nat", "path", "none"):
            raise SchemaError(f"unknown index kind {self.index!r}")


DEFAULT_METAVARS = {"s": "path", "t": "path", "i": "nat", "j": "nat", "k": "nat"}


@dataclass(frozen=True)
class Schema:
    template: Formula
    range: Range
    metavars: tuple = ()  # ((name, "nat" | "path"), ...) in template order

    @classmethod
    def parse(cls, text: str, range: Range | str, metavars: dict | None = None) -> "Schema":
        range = Range(range)
        kinds = dict(DEFAULT_METAVARS)
        kinds.update(metavars or {})
        template = parse_formula(text, metavars=kinds)
        used = []
        for pred in sorted(predicates(template), key=Pred.sort_key):
            for name in _index_names(pred.index):
                if name not in [u for u, _ in used]:
                    used.append((name, kinds[name]))
        schema = cls(template, range, tuple(used))
        schema._check()
        return schema

    def _check(self):
        paths = [n for n, k in self.metavars if k == "path"]
        if self.range is Range.ALL and paths:
            raise SchemaError("path metavariables need a tree range")
        if self.range in TREE_RANGES and len(paths) != 1:
            raise SchemaError(f"range {self.range.value!r} needs exactly one path metavariable")
        if self.range is Range.NOT_IN_TREE and len(self.metavars) != 1:
            raise SchemaError("not_in_tree schemas take only the path metavariable")
        if self.range is Range.CHILD and len(self.metavars) != 2:
            raise SchemaError("child schemas take a path and a number metavariable")

    @property
    def text(self) -> str:
        return format_formula(self.template)

    def instantiate(self, values: dict) -> Formula:
        def sub(atom):
            return Atom(Pred(atom.pred.family, _subst_index(atom.pred.index, values)), atom.var)
        return map_atoms(self.template, sub)

    def to_json(self) -> dict:
        return {"template": self.text, "range": self.range.value,
                "metavars": {n: k for n, k in self.metavars}}


def _index_names(idx):
    if isinstance(idx, str):
        return [idx]
    if isinstance(idx, tuple):
        return [e for e in idx if isinstance(e, str)]
    return []


def _subst_index(idx, values):
    if isinstance(idx, str):
        return values[idx]
    if isinstance(idx, tuple):
        out = []
        for e in idx:
            if isinstance(e, str):
                v = values[e]
                out.extend(v if isinstance(v, tuple) else (v,))
            else:
                out.append(e)
        return tuple(out)
    return idx


@dataclass(frozen=True)
class SchematicTheory:
    sentences: tuple = ()
    schemas: tuple = ()
    families: tuple = ()
    core: str | None = None
    tree: FiniteTree | None = None
    full_language: bool = True

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        object.__setattr__(self, "schemas", tuple(self.schemas))
        object.__setattr__(self, "families", tuple(self.families))
        names = [f.name for f in self.families]
        if len(set(names)) != len(names):
            raise SchemaError("one family spec per name")
        if any(s.range in TREE_RANGES for s in self.schemas) and self.tree is None:
            raise SchemaError("tree-ranged schemas need a tree")
        if self.core is not None and self.family(self.core) is None:
            raise SchemaError(f"core family {self.core!r} is not declared")

    def family(self, name: str) -> FamilySpec | None:
        for f in self.families:
            if f.name == name:
                return f
        return None

    def extend(self, sentences=(), schemas=()) -> "SchematicTheory":
        return replace(self, sentences=self.sentences + tuple(sentences),
                       schemas=self.schemas + tuple(schemas))

    def provably_empty(self, pred: Pred) -> bool:
        """Whether an axiom or schema of the theory literally says ``pred`` is empty."""
        for s in self.sentences:
            if _emptiness_target(s) == pred:
                return True
        for schema in self.schemas:
            target = _emptiness_target(schema.template)
            if target is None or target.family != pred.family:
                continue
            if schema.range is Range.ALL and isinstance(target.index, str) \
                    and isinstance(pred.index, int):
                return True
            if schema.range is Range.NOT_IN_TREE and target.index == (schema.metavars[0][0],) \
                    and isinstance(pred.index, tuple) and pred.index and pred.index not in self.tree:
                return True
        return False


def _emptiness_target(f: Formula) -> Pred | None:
    """``P`` when ``f`` is ``!E x. P(x)``."""
    if isinstance(f, Not) and isinstance(f.arg, Exists):
        body = f.arg.body
        if isinstance(body, Atom) and body.var == f.arg.var:
            return body.pred
    return None


def _freeze(sig: dict) -> tuple:
    return tuple(sorted((k, frozenset(v)) for k, v in sig.items()))


def _add(sig: dict, pred: Pred):
    sig.setdefault(pred.family, set()).add(pred.index)


def support(theory: SchematicTheory, extras=()) -> dict:
    """Family name -> finite set of indices mentioned by the theory's concrete
    sentences, the finite parts of its schemas, and ``extras``."""
    sig: dict = {}
    for f in list(theory.sentences) + list(extras):
        for p in predicates(f):
            _add(sig, p)
    tree = theory.tree
    if tree is not None:
        entries = sorted({i for s in tree.nodes for i in s})
    for schema in theory.schemas:
        if schema.range not in TREE_RANGES or schema.range is Range.NOT_IN_TREE:
            continue
        path_var = next(n for n, k in schema.metavars if k == "path")
        nat_vars = [n for n, k in schema.metavars if k == "nat"]
        for s in _path_candidates(schema, tree):
            for combo in itertools.product(entries, repeat=len(nat_vars)):
                values = {path_var: s, **dict(zip(nat_vars, combo))}
                if schema.range is Range.CHILD and s + combo not in tree:
                    continue
                for p in predicates(schema.instantiate(values)):
                    _add(sig, p)
    return {k: frozenset(v) for k, v in sig.items()}


def _path_candidates(schema, tree):
    nodes = sorted((s for s in tree.nodes if s), key=lambda s: (len(s), s))
    if schema.range is Range.TERMINATING:
        return [s for s in nodes if tree.is_terminating(s)]
    return nodes


@dataclass(frozen=True)
class Projection:
    sentences: tuple
    constraints: tuple
    obligations: tuple = field(default=(), compare=False)

    def sat(self):
        return sat_profile(self.sentences, constraints=self.constraints)

    def entails(self, sentence: Formula) -> bool:
        return entails(self.sentences, sentence, self.constraints)


def core_formula(theory: SchematicTheory, sig: dict, var: str) -> Formula:
    listed = sorted(i for i in sig.get(theory.core, ()) if i is not None)
    return conj(Atom(Pred(theory.core, i), var) for i in listed)


def _fresh_nat(theory: SchematicTheory, sig: dict) -> int:
    top = -1
    for idxs in sig.values():
        for i in idxs:
            if isinstance(i, int):
                top = max(top, i)
            elif isinstance(i, tuple) and i:
                top = max(top, max(i))
    if theory.tree is not None:
        for s in theory.tree.nodes:
            if s:
                top = max(top, max(s))
    return top + 1


def project(theory: SchematicTheory, sig: dict) -> Projection:
    sig = {k: frozenset(v) for k, v in sig.items()}
    need = support(theory)
    for fam, idxs in need.items():
        missing = idxs - sig.get(fam, frozenset())
        if missing:
            raise ProjectionError(f"signature lacks {fam} indices {sorted(map(str, missing))}")
    return _project(theory, _freeze(sig))


@lru_cache(maxsize=4096)
def _project(theory: SchematicTheory, frozen_sig: tuple) -> Projection:
    sig = dict(frozen_sig)
    fresh = _fresh_nat(theory, sig)
    kept = list(theory.sentences)
    obligations = []
    for schema in theory.schemas:
        for values in _candidates(theory, schema, sig, fresh):
            inst = schema.instantiate(values)
            outside = [p for p in predicates(inst) if p.index not in sig.get(p.family, ())]
            if not outside:
                kept.append(inst)
                continue
            rewritten = simplify(_canonical(theory, inst, sig, set(outside)))
            if rewritten == TRUE:
                continue
            if all(theory.provably_empty(p) for p in outside):
                kept.append(rewritten)
            else:
                obligations.append(rewritten)
    constraints = ()
    if theory.core is not None:
        constraints = (Infinite(core_formula(theory, sig, "x"), "x"),)
    kept = tuple(dict.fromkeys(kept))
    obligations = tuple(dict.fromkeys(obligations))
    for ob in obligations:
        if not entails(kept, ob, constraints):
            raise ProjectionError(
                f"canonical interpretation of unlisted symbols fails: {format_formula(ob)}")
    return Projection(kept, constraints, obligations)


def _canonical(theory, f, sig, outside):
    def sub(atom):
        if atom.pred not in outside:
            return atom
        if theory.provably_empty(atom.pred):
            return FALSE
        spec = theory.family(atom.pred.family)
        if spec is None:
            raise ProjectionError(f"undeclared symbol {atom.pred} outside the signature")
        if spec.tail is Tail.FULL:
            return TRUE
        if spec.tail is Tail.ABSENT:
            return FALSE
        if theory.core is None:
            raise ProjectionError(f"family {spec.name} has a core tail but the theory has no core")
        return core_formula(theory, sig, atom.var)
    return map_atoms(f, sub)


def _candidates(theory, schema, sig, fresh):
    names = [n for n, _ in schema.metavars]
    nat_vars = [n for n, k in schema.metavars if k == "nat"]
    fresh_values = [fresh + k for k in range(len(nat_vars))]
    pools = []
    for name, kind in schema.metavars:
        if kind == "path":
            if schema.range is Range.NOT_IN_TREE:
                fams = _families_indexed_by(schema.template, name)
                listed = {i for fam in fams for i in sig.get(fam, ())
                          if isinstance(i, tuple) and i and i not in theory.tree}
                pool = sorted(listed) + [(fresh + len(nat_vars),)]
            else:
                pool = _path_candidates(schema, theory.tree)
        else:
            values = set(fresh_values)
            for fam in _families_indexed_by(schema.template, name):
                for i in sig.get(fam, ()):
                    if isinstance(i, int):
                        values.add(i)
                    elif isinstance(i, tuple):
                        values.update(i)
            if theory.tree is not None:
                values.update(e for s in theory.tree.nodes for e in s)
            pool = sorted(values)
        pools.append(pool)
    for combo in itertools.product(*pools):
        values = dict(zip(names, combo))
        if schema.range is Range.CHILD and not theory.full_language:
            path_var = next(n for n, k in schema.metavars if k == "path")
            nat_var = next(n for n, k in schema.metavars if k == "nat")
            if values[path_var] + (values[nat_var],) not in theory.tree:
                continue
        yield values


def _families_indexed_by(template, name):
    return {p.family for p in predicates(template) if name in _index_names(p.index)}


def forall_index_entails(theory: SchematicTheory, phi: Formula, family: str,
                         var: str = "x", fresh_offset: int = 0, extras=()) -> bool:
    """Whether the theory proves ``A x. (phi -> F_i(x))`` for every index ``i``.

    Indices in the support are checked directly and all others through one
    fresh representative, ``fresh_offset`` places above the support.
    """
    probe = Exists(var, phi)
    sig = {k: set(v) for k, v in support(theory, [probe, *extras]).items()}
    fresh = _fresh_nat(theory, sig) + fresh_offset
    sig.setdefault(family, set()).add(fresh)
    proj = project(theory, sig)
    listed = sorted(i for i in sig[family] if isinstance(i, int))
    goal = Forall(var, Implies(phi, conj(Atom(Pred(family, i), var) for i in listed)))
    return proj.entails(goal)


def projection_for(theory: SchematicTheory, extras=()) -> Projection:
    """Projection onto the support of the theory plus ``extras``."""
    return project(theory, support(theory, extras))


def is_consistent(theory: SchematicTheory) -> bool:
    return projection_for(theory).sat() is not None


def theory_entails(theory: SchematicTheory, sentence: Formula) -> bool:
    return projection_for(theory, [sentence]).entails(sentence)


# theory files

def theory_to_json(theory: SchematicTheory) -> dict:
    return {
        "core": theory.core,
        "families": [{"name": f.name, "index": f.index, "tail": f.tail.value}
                     for f in theory.families],
        "full_language": theory.full_language,
        "schemas": [s.to_json() for s in theory.schemas],
        "sentences": [format_formula(s) for s in theory.sentences],
        "tree": theory.tree.to_json() if theory.tree is not None else None,
    }


def theory_from_json(doc: dict) -> SchematicTheory:
    try:
        families = tuple(FamilySpec(f["name"], f.get("index", "nat"), Tail(f.get("tail", "full")))
                         for f in doc.get("families", []))
        tree = doc.get("tree")
        schemas = tuple(Schema.parse(s["template"], s["range"], s.get("metavars"))
                        for s in doc.get("schemas", []))
        return SchematicTheory(
            sentences=tuple(parse_formula(s) for s in doc.get("sentences", [])),
            schemas=schemas,
            families=families,
            core=doc.get("core"),
            tree=FiniteTree.from_json(tree) if tree is not None else None,
            full_language=doc.get("full_language", True),
        )
    except (KeyError, TypeError) as e:
        raise SchemaError(f"malformed theory document: {e}") from None
