import pytest

from omitting.closure import iterate
from omitting.families import (
    expected_entry_step, rank2_example, t_tree, tree_pool, type_p,
)
from omitting.logic import (
    Atom, FiniteModel, Pred, evaluate, format_formula, parse_formula,
)
from omitting.schematic import Range, project, projection_for, support
from omitting.trees import FiniteTree, TreeError, finite_rank, random_tree

CHAIN = FiniteTree.of((0,), (0, 0))
STAR = FiniteTree.of(*[(i,) for i in range(5)])


def test_root_only_tree_has_no_tree_schemas():
    t = t_tree(FiniteTree.of())
    assert t.schemas == () and t.core == "U"


def test_single_leaf_schemas():
    t = t_tree(FiniteTree.of((0,)))
    assert {s.range for s in t.schemas} == {Range.TERMINATING, Range.NOT_IN_TREE}
    proj = project(t, {"P": {(0,), (1,), (2,)}, "U": {0}})
    texts = {format_formula(s) for s in proj.sentences}
    assert {"!(E x. P<1>(x))", "!(E x. P<2>(x))", "A x. (P<0>(x) -> U_0(x))"} <= texts


def test_chain_has_the_conditional_instance():
    texts = {format_formula(s) for s in projection_for(t_tree(CHAIN)).sentences}
    assert "!(E x. P<0,0>(x)) -> (A x. (P<0>(x) -> U_0(x)))" in texts


def test_rank2_example():
    t = rank2_example()
    assert parse_formula("E x. P(x)") in t.sentences
    assert t.core == "U" and t.family("Q").tail.value == "core"


def test_type_p():
    p = type_p()
    assert p.member(4) == Atom(Pred("U", 4), "x")
    assert p.var == "x" and p.family == "U"


def test_expected_entry_step():
    assert expected_entry_step(CHAIN, (0, 0)) == 1
    assert expected_entry_step(CHAIN, (0,)) == 2
    assert all(expected_entry_step(STAR, s) == 1 for s in STAR.nodes if s)
    with pytest.raises(TreeError):
        expected_entry_step(CHAIN, ())
    with pytest.raises(TreeError):
        expected_entry_step(CHAIN, (1,))


@pytest.mark.parametrize("seed", range(8))
def test_witness_model(seed):
    """All U full, one P of rank beta full, the rest empty, models the theory
    at step beta together with the existence of that P."""
    tree = random_tree(seed, 10)
    state = iterate(t_tree(tree), type_p(), tree_pool(tree))
    by_step = {}
    for beta in range(finite_rank(tree, ())):
        stage = _stage(state, beta)
        for s in tree.nodes:
            if s and finite_rank(tree, s) == beta:
                exists = parse_formula(f"E x. P<{','.join(map(str, s))}>(x)")
                proj = projection_for(stage, [exists])
                sig = support(stage, [exists])
                ext = {Pred("U", i): {0, 1, 2} for i in sig.get("U", ())}
                ext.update({Pred("P", q): ({0, 1, 2} if q == s else set()) for q in sig["P"]})
                m = FiniteModel(3, ext)
                assert all(evaluate(m, a) for a in proj.sentences)
                assert evaluate(m, exists)
                by_step[beta] = True
    assert len(by_step) == finite_rank(tree, ())


def _stage(state, beta):
    from omitting.closure import extend_with, refutation
    return extend_with(state.base, [refutation(c) for c, k in state.ledger if k <= beta])
