import pytest
from hypothesis import given, settings, strategies as st

from omitting.ordinals import (
    OMEGA, ONE, ZERO, Kind, Ordinal, OrdinalError, OrdinalSyntaxError, add, classify, compare,
    format_ordinal, fund_seq, index_above, is_limit, parse_ordinal,
)

import oracles

W = parse_ordinal


def ordinals(max_leaves=6):
    base = st.integers(0, 4).map(Ordinal.of)

    def extend(children):
        term = st.tuples(children, st.integers(1, 3))
        return st.lists(term, min_size=1, max_size=3).map(_cnf)

    return st.recursive(base, extend, max_leaves=max_leaves)


def _cnf(terms):
    out = ZERO
    for e, c in sorted(terms, key=lambda t: oracles.from_ordinal(t[0]), reverse=True):
        out = add(out, Ordinal.omega_power(e, c))
    return out


limits = ordinals().filter(is_limit)


class TestExamples:
    def test_compare(self):
        assert compare(OMEGA, Ordinal.of(2)) == 1
        assert compare(ZERO, ZERO) == 0
        assert compare(W("w^2 + w"), W("w*5")) == 1

    def test_compare_against_second_comparator(self):
        a, b = W("w^2 + w"), W("w*5")
        assert oracles.cmp(oracles.from_ordinal(a), oracles.from_ordinal(b)) == 1

    def test_add(self):
        assert add(OMEGA, ONE) == W("w + 1")
        assert add(ONE, OMEGA) == OMEGA
        assert add(W("w*2 + 3"), OMEGA) == W("w*3")
        assert oracles.add(oracles.from_ordinal(W("w*2 + 3")), oracles.from_ordinal(OMEGA)) \
            == oracles.from_ordinal(W("w*3"))

    def test_classify(self):
        assert classify(ZERO).kind is Kind.ZERO
        c = classify(W("w + 1"))
        assert c.kind is Kind.SUCCESSOR and c.pred == OMEGA
        assert classify(W("w^2")).kind is Kind.LIMIT

    @pytest.mark.parametrize("k", range(0, 101, 7))
    def test_fund_seq_omega(self, k):
        assert fund_seq(OMEGA, k) == Ordinal.of(k)

    def test_fund_seq_successor_exponent(self):
        assert fund_seq(W("w^2"), 3) == W("w*3")
        assert fund_seq(W("w*2"), 3) == W("w + 3")
        for text, i in [("w^2", 3), ("w*2", 3), ("w^(w)", 4), ("w^(w+1)*2", 2)]:
            want = oracles.fund(oracles.from_ordinal(W(text)), i)
            assert oracles.from_ordinal(fund_seq(W(text), i)) == want

    def test_fund_seq_limit_exponent(self):
        assert fund_seq(W("w^(w)"), 3) == W("w^3")
        assert fund_seq(W("w^(w)*2"), 2) == W("w^(w) + w^2")

    def test_fund_seq_rejects_non_limits(self):
        for text in ["0", "3", "w + 1"]:
            with pytest.raises(OrdinalError):
                fund_seq(W(text), 0)

    def test_index_above(self):
        assert index_above(OMEGA, Ordinal.of(7)) == 7
        assert index_above(W("w^2"), W("w*3")) == 3
        assert index_above(OMEGA, ZERO) == 0
        with pytest.raises(OrdinalError):
            index_above(OMEGA, OMEGA)

    @pytest.mark.parametrize("text", ["w^2*3 + w + 4", "0", "w^(w)", "w^(w^(w) + 1)*2 + 5"])
    def test_round_trip(self, text):
        assert format_ordinal(W(text)) == text

    def test_parse_normalises_sums(self):
        assert W("1 + w") == OMEGA
        assert W("w + w") == W("w*2")

    @pytest.mark.parametrize("text", ["w^", "w*0", "w^(w", "x", "w + + 1"])
    def test_syntax_errors(self, text):
        with pytest.raises(OrdinalSyntaxError) as e:
            W(text)
        assert e.value.position >= 0

    def test_malformed_terms_rejected(self):
        with pytest.raises(OrdinalError):
            Ordinal(((ZERO, 1), (ONE, 1)))
        with pytest.raises(OrdinalError):
            Ordinal(((ONE, 0),))


@settings(max_examples=300, deadline=None)
@given(ordinals(), ordinals())
def test_compare_matches_second_comparator(a, b):
    assert compare(a, b) == oracles.cmp(oracles.from_ordinal(a), oracles.from_ordinal(b))


@settings(max_examples=300, deadline=None)
@given(ordinals(), ordinals())
def test_add_matches_second_adder(a, b):
    assert oracles.from_ordinal(add(a, b)) == oracles.add(oracles.from_ordinal(a),
                                                          oracles.from_ordinal(b))


@settings(max_examples=200, deadline=None)
@given(ordinals(), ordinals(), ordinals())
def test_order_laws(a, b, c):
    assert (compare(a, b) == 0) == (a == b)
    assert compare(a, b) == -compare(b, a)
    if compare(a, b) <= 0 and compare(b, c) <= 0:
        assert compare(a, c) <= 0


@settings(max_examples=200, deadline=None)
@given(ordinals(), ordinals(), ordinals())
def test_add_laws(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))
    assert add(a, ZERO) == a == add(ZERO, a)
    assert compare(b, add(a, b)) <= 0


@settings(max_examples=200, deadline=None)
@given(limits, st.integers(0, 20))
def test_fund_seq_laws(lam, i):
    assert fund_seq(lam, i) < lam
    assert fund_seq(lam, i + 1) > fund_seq(lam, i)
    assert oracles.from_ordinal(fund_seq(lam, i)) == oracles.fund(oracles.from_ordinal(lam), i)


@settings(max_examples=200, deadline=None)
@given(limits, ordinals())
def test_cofinality(lam, beta):
    if beta >= lam:
        return
    i = index_above(lam, beta)
    assert fund_seq(lam, i) >= beta
    assert i == 0 or fund_seq(lam, i - 1) < beta


@settings(max_examples=200, deadline=None)
@given(ordinals())
def test_successor_rebuild(a):
    c = classify(a)
    if c.kind is Kind.SUCCESSOR:
        assert add(c.pred, ONE) == a
    assert (c.kind is Kind.LIMIT) == oracles.is_limit(oracles.from_ordinal(a))


@settings(max_examples=200, deadline=None)
@given(ordinals())
def test_format_round_trip(a):
    assert parse_ordinal(format_ordinal(a)) == a
