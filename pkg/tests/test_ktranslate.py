import random

import pytest

from omitting.ktranslate import (
    Coded, KAnd, KExists, KNot, KOr, KPred, Member, NamespaceCollision, SExists, SExistsSet,
    SNot, SOr, SOSyntaxError, ScopeError, Var, absorb_guards, desugar, format_k,
    format_so, k_translate, k_variables, parse_so, so_variables,
)

import oracles


def test_membership_clause():
    k = k_translate(Member(Var("t"), "X"))
    assert k == KAnd(KPred(Var("t")), Coded("x_X", Var("t")))
    assert format_k(k) == "K(t) & (x_X)_t != 0"


def test_set_and_number_quantifiers():
    k = k_translate(parse_so("EX X. E n. n in X"))
    assert format_k(k) == "E x_X. E n. (K(n) & (K(n) & (x_X)_n != 0))"
    assert format_k(absorb_guards(k)) == "E x_X. E n. (K(n) & (x_X)_n != 0)"
    assert oracles.k_tuples(k) == oracles.k_rewrite(parse_so("EX X. E n. n in X"))


def test_negation_clause():
    psi = parse_so("E n. n = 0")
    assert k_translate(SNot(psi)) == KNot(k_translate(psi))


def test_number_quantifier_clause():
    psi = Member(Var("n"), "X")
    assert k_translate(SExists("n", psi)) == KExists("n", KAnd(KPred(Var("n")), k_translate(psi)))


def test_set_equality_goes_through_membership():
    k = k_translate(parse_so("EX X. EX Y. X = Y"))
    assert {"x_X", "x_Y"} <= k_variables(k)
    assert "z0" in k_variables(k)


def test_parse():
    f = parse_so("EX X. E n. n in X")
    assert f == SExistsSet("X", SExists("n", Member(Var("n"), "X")))
    with pytest.raises(SOSyntaxError):
        parse_so("E n. n in x")
    with pytest.raises(ScopeError):
        parse_so("E n. n in X")
    with pytest.raises(SOSyntaxError):
        parse_so("E n. n = 2")


@pytest.mark.parametrize("text", [
    "EX X. E n. n in X", "A n. (n + 1) * n = 0 | !(n = 1)", "AX X. EX Y. X = Y -> E m. m in Y",
    "E n. (n = 0 -> n = 1) -> n = 0", "E n. !!(n * (n + 1) = 1)",
])
def test_round_trip(text):
    f = parse_so(text)
    assert parse_so(format_so(f)) == f


def test_namespace_collision():
    with pytest.raises(NamespaceCollision):
        k_translate(parse_so("E x_1. x_1 = 0"))


def _check_homomorphism(prim, k):
    if isinstance(prim, SNot):
        assert isinstance(k, KNot)
        _check_homomorphism(prim.arg, k.arg)
    elif isinstance(prim, SOr):
        assert isinstance(k, KOr)
        _check_homomorphism(prim.left, k.left)
        _check_homomorphism(prim.right, k.right)
    elif isinstance(prim, SExists):
        assert isinstance(k, KExists) and k.var == prim.var
        _check_homomorphism(prim.body, k.body.right)
    elif isinstance(prim, SExistsSet):
        assert isinstance(k, KExists) and k.var == "x_" + prim.var
        _check_homomorphism(prim.body, k.body)
    else:
        assert not isinstance(k, (KNot, KOr, KExists))


def _sorted_sets(f):
    return {v for v in so_variables(f) if v[0].isupper()}


@pytest.mark.parametrize("seed", range(5))
def test_invariants_on_random_sentences(seed):
    rng = random.Random(seed)
    for _ in range(200):
        theta = random_theta(rng)
        k = k_translate(theta)
        _check_homomorphism(desugar(theta), k)
        codes = {v for v in k_variables(k) if v.startswith("x_")}
        assert codes.isdisjoint(so_variables(theta))
        sets = _sorted_sets(theta)
        assert codes == {"x_" + s for s in sets} and len(codes) == len(sets)
        assert all(not v[0].isupper() for v in k_variables(k))
        assert oracles.k_tuples(k) == oracles.k_rewrite(theta)


def random_theta(rng):
    return oracles.random_so(rng)
