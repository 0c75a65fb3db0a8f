"""Well-founded trees over finite sequences of naturals.

Paths are plain tuples of ints; ``()`` is the root.  A :class:`FiniteTree` is
an explicit prefix-closed set of paths.  An :class:`OrdinalTree` stands for the
canonical tree of rank ``alpha`` and is never materialised: membership and
ranks are computed by walking down the ordinal, child ``i`` of the tree for a
successor ``b + 1`` being the tree for ``b`` and child ``i`` of the tree for a
limit ``l`` being the tree for ``fund_seq(l, i)``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import cached_property

from .ordinals import Kind, Ordinal, add, classify, fund_seq, parse_ordinal, ONE

Path = tuple[int, ...]


class TreeError(ValueError):
    pass


def format_path(s: Path) -> str:
    return "<" + ",".join(str(i) for i in s) + ">"


_PATH = re.compile(r"^\s*<\s*((?:\d+\s*(?:,\s*\d+\s*)*)?)>\s*$")


def parse_path(text: str) -> Path:
    m = _PATH.match(text)
    if not m:
        raise TreeError(f"malformed path {text!r}")
    body = m.group(1).strip()
    return tuple(int(x) for x in body.split(",")) if body else ()


@dataclass(frozen=True)
class FiniteTree:
    nodes: frozenset

    def __post_init__(self):
        nodes = frozenset(tuple(s) for s in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if () not in nodes:
            raise TreeError("a tree must contain the root")
        for s in nodes:
            if any(not isinstance(i, int) or i < 0 for i in s):
                raise TreeError(f"bad path entry in {s}")
            if s and s[:-1] not in nodes:
                raise TreeError(f"{format_path(s)} present but its parent is not")

    @classmethod
    def of(cls, *paths) -> "FiniteTree":
        return cls(frozenset(paths) | {()})

    def __contains__(self, s) -> bool:
        return tuple(s) in self.nodes

    def __len__(self):
        return len(self.nodes)

    @cached_property
    def children(self) -> dict:
        kids: dict = {s: [] for s in self.nodes}
        for s in self.nodes:
            if s:
                kids[s[:-1]].append(s[-1])
        return {s: tuple(sorted(v)) for s, v in kids.items()}

    def sorted_paths(self) -> list:
        return sorted(self.nodes, key=lambda s: (len(s), s))

    def is_terminating(self, s: Path) -> bool:
        return s in self.nodes and not self.children[s]

    @cached_property
    def ranks(self) -> dict:
        out = {}
        for s in sorted(self.nodes, key=len, reverse=True):
            out[s] = max((out[s + (i,)] + 1 for i in self.children[s]), default=0)
        return out

    def to_json(self) -> list:
        return [format_path(s) for s in self.sorted_paths()]

    @classmethod
    def from_json(cls, items) -> "FiniteTree":
        return cls(frozenset(parse_path(x) for x in items))


@dataclass(frozen=True)
class OrdinalTree:
    alpha: Ordinal

    @classmethod
    def parse(cls, text: str) -> "OrdinalTree":
        return cls(parse_ordinal(text))


def child_ordinal(alpha: Ordinal, i: int) -> Ordinal | None:
    """Index of the subtree below child ``<i>`` of the tree for ``alpha``."""
    kind, pred = classify(alpha)
    if kind is Kind.ZERO:
        return None
    if kind is Kind.SUCCESSOR:
        return pred
    return fund_seq(alpha, i)


def _walk(alpha: Ordinal, s: Path) -> Ordinal | None:
    for i in s:
        alpha = child_ordinal(alpha, i)
        if alpha is None:
            return None
    return alpha


def contains(t, s: Path) -> bool:
    if isinstance(t, FiniteTree):
        return tuple(s) in t.nodes
    return _walk(t.alpha, tuple(s)) is not None


def subtree_rank(alpha: Ordinal) -> Ordinal:
    """Rank of the canonical tree for ``alpha`` by the sup-over-children recursion."""
    kind, pred = classify(alpha)
    if kind is Kind.ZERO:
        return alpha
    if kind is Kind.SUCCESSOR:
        # every child is the tree for pred
        return add(subtree_rank(pred), ONE)
    # children have ranks fund_seq(alpha, i), a strictly increasing cofinal
    # sequence, so sup_i(rank_i + 1) is alpha itself
    return alpha


def rank_at(t: OrdinalTree, s: Path) -> Ordinal | None:
    """Ordinal rank of ``s`` in ``t``, or ``None`` for paths outside the tree."""
    sub = _walk(t.alpha, tuple(s))
    return None if sub is None else subtree_rank(sub)


def finite_rank(t: FiniteTree, s: Path) -> int:
    s = tuple(s)
    if s not in t.nodes:
        return -1
    return t.ranks[s]


def truncate(t: OrdinalTree, width: int, depth: int) -> FiniteTree:
    if width < 1 or depth < 0:
        raise TreeError("width must be >= 1 and depth >= 0")
    nodes = {(): t.alpha}
    frontier = [()]
    while frontier:
        s = frontier.pop()
        if len(s) >= depth:
            continue
        for i in range(width):
            sub = child_ordinal(nodes[s], i)
            if sub is None:
                break
            nodes[s + (i,)] = sub
            frontier.append(s + (i,))
    return FiniteTree(frozenset(nodes))


def random_tree(seed, max_nodes: int) -> FiniteTree:
    """A deterministic pseudo-random finite tree with at most ``max_nodes`` nodes."""
    if max_nodes < 1:
        raise TreeError("max_nodes must be >= 1")
    rng = random.Random(seed)
    size = rng.randint(1, max_nodes)
    nodes = [()]
    present = {()}
    while len(nodes) < size:
        parent = rng.choice(nodes)
        used = {s[-1] for s in present if s[:-1] == parent and s}
        free = [i for i in range(len(used) + 2) if i not in used]
        child = parent + (rng.choice(free),)
        nodes.append(child)
        present.add(child)
    return FiniteTree(frozenset(present))
