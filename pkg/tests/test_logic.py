import random

import pytest
from hypothesis import given, settings, strategies as st

from omitting.logic import (
    INF, And, Atom, CountExists, Eq, Exists, FiniteModel, Forall, FormulaSyntaxError, Implies,
    Infinite, Not, Or, Pred, RegionProfile, UnboundVariableError, UnknownPredicateError,
    compile_formula, entails, evaluate, expand_counting, format_formula, materialize,
    models_by_counts, parse_formula, profile_of_model, profile_truth, quantifier_weight,
    sat_profile, sat_profile_exhaustive,
)

import corpus

U, P = Pred("U"), Pred("P")
A, B = corpus.A, corpus.B
SMALL = corpus.sentences(5)


def f(text, **kw):
    return parse_formula(text, **kw)


# random ASTs over indexed families, for the printer/parser round trip

_preds = st.sampled_from([Pred("U", 0), Pred("U", 12), Pred("P", (1, 0)), Pred("P", ()),
                          Pred("Q"), Pred("A"), Pred("E")])


@st.composite
def asts(draw, scope=("x",), depth=3):
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        if len(scope) > 1 and draw(st.booleans()):
            a, b = draw(st.permutations(scope))[:2]
            return Eq(a, b)
        return Atom(draw(_preds), draw(st.sampled_from(scope)))
    kind = draw(st.sampled_from(["not", "and", "or", "imp", "q"]))
    if kind == "not":
        return Not(draw(asts(scope, depth - 1)))
    if kind == "q":
        v = ["x", "y", "z", "w"][len(scope) % 4]
        body = draw(asts(scope + (v,), depth - 1))
        q = draw(st.sampled_from([Exists, Forall, "count"]))
        if q == "count":
            return CountExists(draw(st.integers(1, 4)), v, body)
        return q(v, body)
    left, right = draw(asts(scope, depth - 1)), draw(asts(scope, depth - 1))
    return {"and": And, "or": Or, "imp": Implies}[kind](left, right)


class TestParser:
    @pytest.mark.parametrize("text", ["A x. (P<0>(x) -> U_0(x))", "E>=3 x. U_0(x)", "E x. x = x"])
    def test_round_trip(self, text):
        assert format_formula(f(text)) == text

    def test_structure(self):
        assert f("A x. (P<0>(x) -> U_0(x))") == \
            Forall("x", Implies(Atom(Pred("P", (0,)), "x"), Atom(Pred("U", 0), "x")))
        assert f("E>=3 x. U_0(x)") == CountExists(3, "x", Atom(Pred("U", 0), "x"))

    def test_precedence(self):
        assert f("A(x) | B(x) & A(x) -> B(x)", free=["x"]) == Implies(
            Or(Atom(A, "x"), And(Atom(B, "x"), Atom(A, "x"))), Atom(B, "x"))

    def test_errors(self):
        with pytest.raises(FormulaSyntaxError) as e:
            f("E x. (U(x)")
        assert e.value.position == 10
        with pytest.raises(UnboundVariableError):
            f("U(x)")
        with pytest.raises(UnknownPredicateError):
            f("E x. V(x)", signature={"U"})
        with pytest.raises(FormulaSyntaxError):
            f("E>=0 x. U(x)")

    @settings(max_examples=300, deadline=None)
    @given(asts())
    def test_generated_round_trip(self, ast):
        assert parse_formula(format_formula(ast), free=["x"]) == ast


class TestEvaluation:
    def test_examples(self):
        u0 = Pred("U", 0)
        assert evaluate(FiniteModel(2, {u0: {0, 1}}), f("E>=2 x. U_0(x)"))
        assert not evaluate(FiniteModel(1, {u0: set()}), f("E x. U_0(x)"))
        assert not evaluate(FiniteModel(3, {u0: {0, 1}}), f("E>=3 x. U_0(x)"))

    def test_model_validation(self):
        with pytest.raises(ValueError):
            FiniteModel(2, {U: {2}})

    def test_weight(self):
        assert quantifier_weight(f("E x. U(x)")) == 1
        assert quantifier_weight(f("(E>=3 x. U(x)) & (A y. U(y))")) == 4
        assert quantifier_weight(f("true")) == 0

    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from(SMALL), st.integers(0, 5), st.randoms(use_true_random=False))
    def test_counting_expansion_and_compiled_agree(self, s, n, rnd):
        m = FiniteModel(n, {A: {a for a in range(n) if rnd.random() < .5},
                            B: {a for a in range(n) if rnd.random() < .5}})
        want = evaluate(m, s)
        assert evaluate(m, expand_counting(s)) == want
        assert compile_formula(s)(m, {}) == want

    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from(SMALL), st.randoms(use_true_random=False))
    def test_truncation_indistinguishability(self, s, rnd):
        w = quantifier_weight(s)
        counts = [rnd.randint(0, 5) for _ in range(4)]
        other = [c if c < w else rnd.randint(w, 6) for c in counts]
        assert evaluate(_model(counts), s) == evaluate(_model(other), s)


def _model(counts):
    regions = [(False, False), (False, True), (True, False), (True, True)]
    ext = {A: set(), B: set()}
    a = 0
    for (in_a, in_b), c in zip(regions, counts):
        for _ in range(c):
            if in_a:
                ext[A].add(a)
            if in_b:
                ext[B].add(a)
            a += 1
    return FiniteModel(a, ext)


class TestSolver:
    def test_forced_count(self):
        p = sat_profile([f("E>=3 x. U(x)"), f("!(E>=4 x. U(x))")])
        assert p[{U}] == 3

    def test_unsat(self):
        assert sat_profile([f("E x. U(x)"), f("A x. !U(x)")]) is None

    def test_entails(self):
        assert entails([f("A x. (P(x) -> U(x))"), f("E x. P(x)")], f("E x. U(x)"))
        assert not entails([], f("E x. U(x)"))

    def test_equality(self):
        p = sat_profile([f("A x. E y. !(x = y)"), f("E x. U(x)")])
        assert sum(p.counts.values()) >= 2

    def test_infinite_constraint(self):
        assert sat_profile([f("!(E>=5 x. U(x))")], constraints=[Infinite(f("U(x)", free=["x"]))]) \
            is None
        p = sat_profile([f("!(E>=5 x. U(x))")], constraints=[Infinite(f("!U(x)", free=["x"]))])
        assert p[set()] == INF

    def test_empty_domain_allowed(self):
        assert sat_profile([f("A x. false")]) is not None

    def test_agrees_with_brute_force_on_small_corpus(self):
        for s in SMALL:
            brute = any(corpus.truth(s, n).any() for n in range(13))
            assert (sat_profile([s]) is not None) == brute, format_formula(s)

    def test_agrees_with_exhaustive_profile_search(self):
        rng = random.Random(5)
        for _ in range(150):
            s = [rng.choice(SMALL) for _ in range(2)]
            assert (sat_profile(s) is None) == (sat_profile_exhaustive(s) is None)

    def test_returned_profiles_satisfy(self):
        for s in SMALL[::7]:
            p = sat_profile([s])
            if p is not None:
                assert profile_truth(p, s)
                assert evaluate(materialize(p), s)


class TestProfiles:
    def test_materialize_examples(self):
        m = materialize(RegionProfile((U,), {frozenset({U}): 3}, bound=3))
        assert m.domain_size == 3 and m.extensions[U] == {0, 1, 2}
        m = materialize(RegionProfile((U,), {frozenset({U}): INF}, bound=2))
        assert m.domain_size == 3

    def test_materialize_rejects_large_weight(self):
        with pytest.raises(ValueError):
            materialize(RegionProfile((U,), {}, bound=2), weight_bound=3)

    def test_profile_of_model(self):
        p = profile_of_model(FiniteModel(3, {A: {0, 1}, B: {1}}), (A, B))
        assert p[{A}] == 1 and p[{A, B}] == 1 and p[set()] == 1

    def test_random_profiles(self):
        rng = random.Random(17)
        for _ in range(200):
            K = 3
            counts = {frozenset(r): rng.choice([0, 1, 2, 3, INF])
                      for r in [(), (A,), (B,), (A, B)]}
            p = RegionProfile((A, B), counts, bound=K)
            s = rng.choice(SMALL)
            assert evaluate(materialize(p, quantifier_weight(s)), s) == profile_truth(p, s)

    def test_models_by_counts_are_distinct_profiles(self):
        seen = {frozenset(profile_of_model(m, (A, B)).counts.items())
                for m in models_by_counts((A, B), 3)}
        assert len(seen) == 35
