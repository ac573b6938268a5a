import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndepth import fixtures
from ndepth.graded import GradedMultiMap, GradedSpace
from ndepth.structures import (
    AlgebraPresentation,
    SignatureError,
    commutator_dgla,
    end_dga,
    end_nilpotency,
    kapranov_cohomology,
    morphism_check,
    quasi_iso_check,
    random_ncomplex,
    shifted_components,
    tensor_product_structure,
    validate_ainfN,
    validate_nassociative,
    validate_ncomplex,
    validate_ndga,
    validate_ndgla,
)
from ndepth.tensorcoalg import TWO_TRUNCATED

from helpers import dga_fixtures, random_end_algebra


@pytest.mark.parametrize("name", ["unital1", "zero_mult", "dual_numbers", "upper_triangular", "unit_dga", "exterior1", "unit_chain3", "idempotent_null"])
def test_dga_fixtures_are_valid(name):
    P = fixtures.get(name)
    assert validate_ndga(P).valid


def test_three_assoc_corestriction_and_properness():
    P = fixtures.get("three_assoc")
    rep = validate_nassociative(P, 3, 4)
    assert rep.valid and rep.proper
    assert rep.strict.holds
    # (aa)a = ba = c but a(aa) = ab = d
    assert P.mult("b", "a") == {"c": 1} and P.mult("a", "b") == {"d": 1}


def test_three_assoc_strict_fails_on_longer_words():
    rep = validate_nassociative(fixtures.get("three_assoc"), 3, 5)
    assert rep.corestriction.holds
    assert not rep.strict.holds
    assert rep.strict.first_failure == (5, 2, ("a",) * 5)


def _assoc_check(P):
    return validate_ndga(P).verdict("associativity").holds


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_two_associative_is_associative(seed):
    rng = random.Random(seed)
    V = GradedSpace((("x", 0), ("y", 0)))
    m = {}
    for a, b in itertools.product(V.names, repeat=2):
        out = {c: rng.choice([0, 0, 1, -1]) for c in V.names}
        m[(a, b)] = {k: v for k, v in out.items() if v}
    P = AlgebraPresentation(V, "nassociative", 2, mult=GradedMultiMap(V, 2, V, 0, m))
    assert validate_nassociative(P, 2).valid == _assoc_check(P)


@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
@settings(max_examples=15, deadline=None)
def test_commutator_dgla_is_valid(seed, N):
    E = random_end_algebra(random.Random(seed), N=N, dim=2)
    assert validate_ndga(E).valid
    L = commutator_dgla(E)
    assert validate_ndgla(L).valid


@given(st.integers(0, 10**6), st.sampled_from([1, 2, 3]), st.integers(1, 3))
@settings(max_examples=40, deadline=None)
def test_end_bound(seed, N, dim):
    C = random_ncomplex(random.Random(seed), N, dim)
    E = end_dga(C, N)
    order = end_nilpotency(E, 2 * N - 1)
    assert order is not None and order <= 2 * N - 1
    assert validate_ndga(E, 2 * N - 1).valid


def test_end_of_chain3_is_proper():
    E = end_dga(fixtures.get("chain3"))
    assert E.N == 5
    assert end_nilpotency(E, 6) == 5


def test_graded_commutator_kills_d_squared(rng):
    # d² = [δ², -] with the graded commutator, so δ² = 0 forces d² = 0
    for _ in range(20):
        E = end_dga(random_ncomplex(rng, 2, 3), 2)
        assert E.diff.matrix().power(2).is_zero()


def test_ungraded_commutator_breaks_leibniz():
    V = GradedSpace((("p", 0), ("q", 1)))
    C = AlgebraPresentation(V, "ncomplex", 2, diff=GradedMultiMap(V, 1, V, 1, {("p",): {"q": 1}}))
    E = end_dga(C, 2, "ungraded")
    assert not E.diff.matrix().power(2).is_zero()
    assert not validate_ndga(E, 3).verdict("leibniz").holds


def test_kapranov():
    assert kapranov_cohomology(fixtures.get("chain3")) == {1: 0, 2: 0}
    assert kapranov_cohomology(fixtures.get("point")) == {1: 1, 2: 1}


def test_ncomplex_witness():
    V = GradedSpace((("a", 0), ("b", 1), ("c", 2)))
    P = AlgebraPresentation(V, "ncomplex", 2, diff=GradedMultiMap(V, 1, V, 1, {("a",): {"b": 1}, ("b",): {"c": 1}}))
    rep = validate_ncomplex(P)
    assert not rep.valid
    assert rep.verdicts[0].witness == ("a",)
    assert validate_ncomplex(P, 3).valid


def test_ainf_recovers_stasheff_for_dgas():
    for name in dga_fixtures():
        P = fixtures.get(name)
        if P.N != 2 or not shifted_components(P):
            continue
        rep = validate_ainfN(P, 2, 4)
        assert rep.valid and rep.strict.holds
        assert any("reproduced for arities 1..4: True" in n for n in rep.notes)


def test_unit_chain3_lift_is_not_depth3():
    rep = validate_ainfN(fixtures.get("unit_chain3"), 3, 4)
    fail = rep.corestriction.first_failure()
    assert fail.l == 2 and fail.witness == ("1", "u")


def test_two_truncated_mode():
    rep = validate_ainfN(fixtures.get("chain3"), 3, mode=TWO_TRUNCATED)
    assert rep.strict.truncation == 2
    assert rep.corestriction.holds


def test_signature_errors():
    with pytest.raises(SignatureError):
        validate_ndga(fixtures.get("chain3"))
    V = GradedSpace((("x", 0), ("y", 1)))
    # x is a unit but d(x) = y breaks Leibniz
    bad = AlgebraPresentation(
        V,
        "ndga",
        2,
        mult=GradedMultiMap(V, 2, V, 0, {("x", "x"): {"x": 1}, ("x", "y"): {"y": 1}, ("y", "x"): {"y": 1}}),
        diff=GradedMultiMap(V, 1, V, 1, {("x",): {"y": 1}}),
    )
    assert not validate_ndga(bad).verdict("leibniz").holds
    with pytest.raises(ValueError, match="leibniz"):
        commutator_dgla(bad)


def test_tensor_products():
    _, rep = tensor_product_structure(fixtures.get("unit_dga"), fixtures.get("dual_numbers"), L=4)
    assert rep.target == 3 and rep.holds
    _, rep = tensor_product_structure(fixtures.get("three_assoc"), fixtures.get("unital1"), L=4)
    assert rep.target == 4 and rep.holds and rep.nilpotency_order == 4


def test_tensor_rejects_non_strict_inputs():
    with pytest.raises(ValueError, match="strict"):
        tensor_product_structure(fixtures.get("chain3"), fixtures.get("unital1"), L=4)


def test_identity_morphism():
    P = fixtures.get("unit_dga")
    S = P.space.shift(1)
    ident = {1: GradedMultiMap.identity(S)}
    assert morphism_check(ident, P, P).commutes
    q = quasi_iso_check(ident, fixtures.get("chain3"), fixtures.get("chain3"), 3)
    assert q.quasi_isomorphism


def test_non_morphism_witness():
    P = fixtures.get("unit_dga")
    S = P.space.shift(1)
    f = {1: GradedMultiMap(S, 1, S, 0, {("u",): {"u": 1}})}
    rep = morphism_check(f, P, P)
    assert not rep.commutes and rep.witness is not None


def test_report_json_has_schema_version():
    rep = validate_ndga(fixtures.get("dual_numbers"))
    assert rep.to_json()["schema_version"] == 1
