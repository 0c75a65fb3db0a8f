"""Concrete schematic theories: the tree theories and the rank-2 example."""

from __future__ import annotations

from dataclasses import dataclass

from .closure import FamilyCandidate, TypeSchema
from .logic.parser import parse_formula
from .logic.syntax import Atom, Pred
from .schematic import FamilySpec, Range, Schema, SchematicTheory, Tail
from .trees import FiniteTree, OrdinalTree, TreeError, finite_rank, truncate


@dataclass(frozen=True)
class TreeTheorySpec:
    tree: FiniteTree | OrdinalTree
    width: int = 3
    depth: int = 4
    full_language: bool = True

    def finite_tree(self) -> FiniteTree:
        if isinstance(self.tree, FiniteTree):
            return self.tree
        return truncate(self.tree, self.width, self.depth)


CHILD_SCHEMA = "!(E x. P<s,i>(x)) -> (A x. (P<s>(x) -> U_i(x)))"
LEAF_SCHEMA = "A x. (P<s>(x) -> U_i(x))"
OFF_TREE_SCHEMA = "!(E x. P<s>(x))"


def t_tree(spec: TreeTheorySpec | FiniteTree) -> SchematicTheory:
    if isinstance(spec, FiniteTree):
        spec = TreeTheorySpec(spec)
    tree = spec.finite_tree()
    schemas = []
    if len(tree) > 1:
        if any(tree.children[s] for s in tree.nodes if s):
            schemas.append(Schema.parse(CHILD_SCHEMA, Range.CHILD))
        schemas.append(Schema.parse(LEAF_SCHEMA, Range.TERMINATING))
        schemas.append(Schema.parse(OFF_TREE_SCHEMA, Range.NOT_IN_TREE))
    return SchematicTheory(
        schemas=tuple(schemas),
        families=(FamilySpec("P", "path", Tail.ABSENT), FamilySpec("U", "nat", Tail.FULL)),
        core="U",
        tree=tree,
        full_language=spec.full_language,
    )


def rank2_example() -> SchematicTheory:
    return SchematicTheory(
        sentences=(parse_formula("E x. P(x)"),),
        schemas=(
            Schema.parse("(A y. !Q_i(y)) -> (A x. (P(x) -> U_i(x)))", Range.ALL),
            Schema.parse("A x. (Q_i(x) -> U_j(x))", Range.ALL),
        ),
        families=(FamilySpec("P", "none", Tail.FULL), FamilySpec("Q", "nat", Tail.CORE),
                  FamilySpec("U", "nat", Tail.FULL)),
        core="U",
    )


def type_p() -> TypeSchema:
    return TypeSchema(family="U")


def tree_pool(tree: FiniteTree) -> list:
    return [Atom(Pred("P", s), "x") for s in tree.sorted_paths() if s]


def rank2_pool() -> list:
    return [Atom(Pred("P"), "x"), FamilyCandidate("Q")]


def expected_entry_step(tree: FiniteTree, s) -> int:
    s = tuple(s)
    if not s:
        raise TreeError("the root carries no predicate")
    if s not in tree:
        raise TreeError(f"{s} is not a node of the tree")
    return finite_rank(tree, s) + 1
