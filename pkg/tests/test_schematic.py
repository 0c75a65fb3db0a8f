import random

import pytest

from omitting.families import rank2_example, t_tree
from omitting.logic import Atom, Infinite, Pred, conj, format_formula, parse_formula
from omitting.schematic import (
    FamilySpec, ProjectionError, Range, Schema, SchemaError, SchematicTheory, Tail,
    forall_index_entails, project, support, theory_from_json, theory_to_json,
)
from omitting.trees import FiniteTree, random_tree

LEAF = FiniteTree.of((0,))
CHAIN = FiniteTree.of((0,), (0, 0))


def f(text, free=()):
    return parse_formula(text, free=free)


def texts(proj):
    return {format_formula(s) for s in proj.sentences}


class TestSupport:
    def test_single_leaf(self):
        assert support(t_tree(LEAF)) == {"U": {0}, "P": {(0,)}}

    def test_empty_theory(self):
        assert support(SchematicTheory()) == {}

    def test_extras(self):
        sup = support(t_tree(LEAF), [f("A x. (P<0>(x) -> U_7(x))")])
        assert sup["U"] == {0, 7}


class TestProject:
    def test_single_leaf(self):
        proj = project(t_tree(LEAF), {"P": {(0,)}, "U": {0, 1}})
        assert {"A x. (P<0>(x) -> U_0(x))", "A x. (P<0>(x) -> U_1(x))"} <= texts(proj)
        u = [Atom(Pred("U", i), "x") for i in (0, 1)]
        assert proj.constraints == (Infinite(conj(u), "x"),)

    def test_rank2_listed_instances(self):
        proj = project(rank2_example(), {"P": {None}, "Q": {0}, "U": {0, 1}})
        assert texts(proj) == {
            "E x. P(x)",
            "(A y. !Q_0(y)) -> (A x. (P(x) -> U_0(x)))",
            "A x. (Q_0(x) -> U_0(x))",
            "A x. (Q_0(x) -> U_1(x))",
        }
        assert len(proj.constraints) == 1
        # instances at an unlisted Q index are discharged through the core
        assert proj.obligations

    def test_no_schemas(self):
        t = SchematicTheory(sentences=(f("E x. A(x)"),))
        proj = project(t, support(t))
        assert proj.sentences == (f("E x. A(x)"),) and proj.constraints == ()

    def test_signature_below_support(self):
        with pytest.raises(ProjectionError):
            project(t_tree(LEAF), {"U": {0}})

    def test_off_tree_symbols(self):
        t = t_tree(LEAF)
        proj = project(t, {"P": {(0,), (3,)}, "U": {0}})
        assert "!(E x. P<3>(x))" in texts(proj)
        for i in (0, 5):
            assert proj.entails(f(f"A x. (P<3>(x) -> U_{i}(x))"))
        assert forall_index_entails(t, f("P<3>(x)", free=["x"]), "U")

    def test_failed_canonical_interpretation_is_reported(self):
        t = SchematicTheory(
            schemas=(Schema.parse("A x. !V_i(x)", Range.ALL),),
            families=(FamilySpec("V", "nat", Tail.FULL),))
        with pytest.raises(ProjectionError):
            project(t, {})

    def test_schema_validation(self):
        with pytest.raises(SchemaError):
            Schema.parse("A x. P<s>(x)", Range.ALL)
        with pytest.raises(SchemaError):
            SchematicTheory(schemas=(Schema.parse("A x. P<s>(x)", Range.TERMINATING),))


class TestForallIndex:
    def test_examples(self):
        assert forall_index_entails(t_tree(LEAF), f("P<0>(x)", free=["x"]), "U")
        assert not forall_index_entails(t_tree(LEAF), f("x = x", free=["x"]), "U")
        assert forall_index_entails(rank2_example(), f("Q_0(x)", free=["x"]), "U")
        assert not forall_index_entails(rank2_example(), f("P(x)", free=["x"]), "U")

    def test_fresh_index_stability(self):
        theories = [t_tree(LEAF), t_tree(CHAIN), rank2_example()] + \
            [t_tree(random_tree(seed, 8)) for seed in range(5)]
        for t in theories:
            phis = ["x = x", "U_0(x)"] + [format_formula(Atom(p, "x")) for p in _preds(t)]
            for text in phis:
                phi = f(text, free=["x"])
                answers = {forall_index_entails(t, phi, "U", fresh_offset=k) for k in (0, 3, 11)}
                assert len(answers) == 1, text


def _preds(t):
    sup = support(t)
    return [Pred(fam, i) for fam, idxs in sup.items() if fam != "U" for i in idxs]


def test_projection_monotonicity():
    rng = random.Random(3)
    t = t_tree(CHAIN)
    small = support(t)
    big = {"P": small["P"] | {(1,), (0, 1)}, "U": small["U"] | {1, 2}}
    candidates = [f(s) for s in [
        "A x. (P<0>(x) -> U_0(x))", "E x. P<0,0>(x)", "!(E x. P<0,0>(x)) -> !(E x. P<0>(x))",
        "A x. (P<0,0>(x) -> U_0(x))", "E>=2 x. U_0(x)", "A x. U_0(x)",
        "(E x. P<0>(x)) -> (E x. !P<0,0>(x) & P<0>(x))"]]
    for s in rng.sample(candidates, len(candidates)):
        assert project(t, small).entails(s) == project(t, big).entails(s), format_formula(s)


def test_theory_files_round_trip():
    for t in (t_tree(CHAIN), rank2_example()):
        doc = theory_to_json(t)
        assert theory_from_json(doc) == t
        assert theory_to_json(theory_from_json(doc)) == doc


def test_malformed_theory_file():
    with pytest.raises(SchemaError):
        theory_from_json({"schemas": [{"range": "all"}]})
