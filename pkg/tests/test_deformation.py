import itertools
from fractions import Fraction

import pytest

from ndepth import fixtures
from ndepth.deformation import (
    CochainSpace,
    NotNilpotentError,
    cohomology_HNM,
    deformation_spaces,
    full_check,
    hochschild_differential,
    identity_two_defect,
    kernel_inclusion,
    proper_search,
    t1_operator,
    t_operator,
)
from ndepth.exactmath import SparseMatrix, rank
from ndepth.graded import GradedMultiMap
from ndepth.structures import shift_product

DEFORMABLE = ["unital1", "zero_mult", "dual_numbers", "upper_triangular", "unit_dga", "exterior1", "idempotent_null", "three_assoc"]


@pytest.mark.parametrize("name", DEFORMABLE)
def test_telescoping_composite_vanishes(name):
    P = fixtures.get(name)
    C1, C2 = deformation_spaces(P)
    T1, _ = t1_operator(P, C1, C2)
    for k in (P.N, P.N + 1):
        Tk, _ = t_operator(P, k, C2)
        assert (Tk @ T1).is_zero(), k


@pytest.mark.parametrize("name", ["unital1", "dual_numbers", "upper_triangular", "idempotent_null"])
def test_t2_matches_hochschild_rank(name):
    # for a degree-0 algebra t_2 on 2-cochains is the Hochschild differential up to signs
    P = fixtures.get(name)
    T2, _ = t_operator(P, 2, CochainSpace(P, [2], 1))
    names = P.space.names
    cols = []
    for ins in itertools.product(names, repeat=2):
        for out in names:
            f = GradedMultiMap(P.space, 2, P.space, 0, {ins: {out: 1}})
            D = hochschild_differential(P.mult, f).matrix()
            cols.append({i * D.ncols + j: v for i, row in D.rows().items() for j, v in row.items()})
    H = SparseMatrix.from_columns(len(names) ** 4, cols)
    assert rank(T2) == rank(H)


def test_known_cohomology():
    assert cohomology_HNM(fixtures.get("unital1"), 2, 3).dim_H == 0
    assert cohomology_HNM(fixtures.get("dual_numbers"), 2, 3).dim_H == 1
    assert cohomology_HNM(fixtures.get("upper_triangular"), 2, 3).dim_H == 0


@pytest.mark.parametrize("name", ["unital1", "dual_numbers", "idempotent_null"])
@pytest.mark.parametrize("M", [2, 3])
def test_kernel_inclusion(name, M):
    ok, wit = kernel_inclusion(fixtures.get(name), M)
    assert ok, wit


def test_proper_certificate():
    cert = proper_search(fixtures.get("idempotent_null"), 2, 3)
    assert cert is not None
    assert cert.tM_zero and cert.tM1_nonzero
    assert cert.identity_one_holds
    assert cert.identity_two_witness == ("x", "x", "y")
    assert identity_two_defect(fixtures.get("idempotent_null").mult, cert.f_unshifted) is not None


def test_no_proper_deformation_of_the_field():
    assert proper_search(fixtures.get("unital1"), 2, 3) is None


def test_full_check_cocycle():
    P = fixtures.get("dual_numbers")
    f = GradedMultiMap(P.space, 2, P.space, 0, {("e", "e"): {"1": 1}})
    assert hochschild_differential(P.mult, f).is_zero()
    rep = full_check(P, {1: {2: shift_product(f)}}, 2, 2)
    assert rep.deformation and rep.h1_matches_tM
    assert rep.residual_h1 == {}
    assert rep.mc_agree


def test_full_check_non_cocycle():
    P = fixtures.get("dual_numbers")
    f = GradedMultiMap(P.space, 2, P.space, 0, {("e", "1"): {"1": 1}})
    assert not hochschild_differential(P.mult, f).is_zero()
    rep = full_check(P, {1: {2: shift_product(f)}}, 2, 2)
    assert not rep.deformation
    assert rep.h1_matches_tM
    assert rep.residual_h1


def test_full_check_rejects_h0_part():
    P = fixtures.get("dual_numbers")
    with pytest.raises(ValueError):
        full_check(P, {0: {}}, 2, 2)


def test_not_nilpotent_error():
    P = fixtures.get("unit_chain3")
    C2 = CochainSpace(P, [2], 1)
    with pytest.raises(NotNilpotentError):
        t_operator(P, 3, C2)


def test_cochain_space_round_trip():
    P = fixtures.get("dual_numbers")
    C2 = CochainSpace(P, [1, 2], 1)
    for j in range(C2.dim):
        v = {j: Fraction(1)}
        assert C2.vector(C2.element(v)) == v
