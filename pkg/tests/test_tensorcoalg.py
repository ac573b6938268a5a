import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndepth import fixtures
from ndepth.graded import GradedMultiMap, GradedSpace
from ndepth.structures import shifted_components, stasheff_operator
from ndepth.tensorcoalg import (
    TWO_TRUNCATED,
    TruncatedCoalgebra,
    build_coderivation,
    coderivation_law_defect,
    corestriction_identities,
    strict_nilpotency,
)

A = GradedSpace((("p", 0), ("q", 1)))
S = A.shift(1)


@st.composite
def components(draw, max_arity=3):
    """Random degree-one maps m_1..m_k on A[1] (no relations imposed)."""
    out = {}
    for k in range(1, max_arity + 1):
        table = {}
        for ins in itertools.product(S.names, repeat=k):
            want = sum(S.degree(n) for n in ins) + 1
            for o in S.names:
                if S.degree(o) == want:
                    c = draw(st.integers(-2, 2))
                    if c:
                        table.setdefault(ins, {})[o] = c
        out[k] = GradedMultiMap(S, k, S, 1, table)
    return out


def naive_apply(ms, word):
    """Coderivation applied to one word, straight from the definition."""
    out = {}
    for k, m in ms.items():
        for i in range(len(word) - k + 1):
            sign = -1 if sum(S.degree(x) for x in word[:i]) % 2 else 1
            for o, c in m(*word[i : i + k]).items():
                key = word[:i] + (o,) + word[i + k :]
                out[key] = out.get(key, 0) + sign * c
    return {k: v for k, v in out.items() if v}


def naive_power(ms, word, p, L):
    vec = {word: Fraction(1)}
    for _ in range(p):
        nxt = {}
        for w, c in vec.items():
            for w2, c2 in naive_apply(ms, w).items():
                if len(w2) <= L:
                    nxt[w2] = nxt.get(w2, 0) + c * c2
        vec = {k: v for k, v in nxt.items() if v}
    return vec


def test_carrier_dimensions():
    c = TruncatedCoalgebra(S, 3)
    assert c.dim == 2 + 4 + 8
    assert list(c.length_range(2)) == list(range(2, 6))
    assert TruncatedCoalgebra(S, 5, TWO_TRUNCATED).max_length == 2


@given(components())
@settings(max_examples=30, deadline=None)
def test_lift_is_a_coderivation(ms):
    delta = build_coderivation(ms, TruncatedCoalgebra(S, 3))
    assert coderivation_law_defect(delta) == []


@given(components())
@settings(max_examples=30, deadline=None)
def test_lift_matches_naive_application(ms):
    c = TruncatedCoalgebra(S, 3)
    delta = build_coderivation(ms, c)
    for col, w in enumerate(c.words):
        got = {c.word_names(c.words[r]): v for r, v in delta.matrix.column(col).items()}
        assert got == naive_apply(ms, c.word_names(w))


@given(components())
@settings(max_examples=25, deadline=None)
def test_corestriction_of_square_is_stasheff(ms):
    delta = build_coderivation(ms, TruncatedCoalgebra(S, 4))
    for l in range(1, 5):
        assert stasheff_operator(ms, l).matrix() == delta.carrier.block(delta.power(2), l, 1)


@given(components(max_arity=2))
@settings(max_examples=40, deadline=None)
def test_two_semantics_agree_for_squares(ms):
    # δ² is itself a coderivation, so it vanishes iff its corestriction does
    delta = build_coderivation(ms, TruncatedCoalgebra(S, 3))
    assert strict_nilpotency(delta, 2).holds == corestriction_identities(delta, 2).holds


@given(components(max_arity=2), st.integers(2, 3))
@settings(max_examples=30, deadline=None)
def test_strict_witness_reevaluates(ms, N):
    L = 3
    delta = build_coderivation(ms, TruncatedCoalgebra(S, L))
    rep = strict_nilpotency(delta, N)
    if rep.holds:
        return
    l, j, word = rep.first_failure
    assert len(word) == l
    direct = naive_power(ms, word, N, L)
    expected = {",".join(w): v for w, v in direct.items() if len(w) == j}
    assert {k: Fraction(v) for k, v in rep.value.items()} == expected


def test_tree_and_matrix_routes_agree_on_fixtures():
    for name in ("three_assoc", "dual_numbers", "unit_chain3", "chain3"):
        P = fixtures.get(name)
        delta = build_coderivation(shifted_components(P), TruncatedCoalgebra(P.space.shift(1), P.N + 1))
        rep = corestriction_identities(delta, P.N)
        assert rep.routes_agree, name


def test_chain3_strict_failure_block():
    P = fixtures.get("chain3")
    delta = build_coderivation(shifted_components(P), TruncatedCoalgebra(P.space.shift(1), 4))
    assert corestriction_identities(delta, 3).holds
    rep = strict_nilpotency(delta, 3)
    assert not rep.holds
    assert rep.first_failure == (2, 2, ("u", "u"))
    assert rep.value == {"v,w": "1", "w,v": "-1"}


def test_component_checks():
    c = TruncatedCoalgebra(S, 2)
    bad = GradedMultiMap(S, 1, S, 0, {})
    bad3 = GradedMultiMap(S, 3, S, 1, {})
    with pytest.raises(ValueError):
        build_coderivation({3: bad3}, c)
    build_coderivation({1: bad}, c)  # the zero map is allowed at any degree
