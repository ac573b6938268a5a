"""Acceptance criteria, one check per criterion.

Run under pytest, or directly (``python3 tests/test_acceptance.py``) to get the
twelve PASS/FAIL lines on their own.  Every comparison is exact.
"""

from __future__ import annotations

import math
import random
import re
import sys
import time
from pathlib import Path

import pytest

from ndepth import fixtures
from ndepth import operadcount as oc
from ndepth.deformation import NotNilpotentError, cohomology_HNM, deformation_spaces, full_check, hochschild_differential, kernel_inclusion, t1_operator, t_operator
from ndepth.graded import GradedMultiMap
from ndepth.maurercartan import mc_coefficients, nc_oracle
from ndepth.structures import (
    end_dga,
    end_nilpotency,
    kapranov_cohomology,
    random_ncomplex,
    shift_product,
    shifted_components,
    stasheff_operator,
    tensor_product_structure,
    validate_ainfN,
    validate_nassociative,
)
from ndepth.tensorcoalg import TruncatedCoalgebra, build_coderivation, corestriction_identities, strict_nilpotency
from ndepth.trees import enumerate_arity, enumerate_ub

FINDINGS = Path(__file__).resolve().parent.parent / "findings.md"


def _vec(v) -> str:
    return " + ".join(f"{c}·{k}" for k, c in sorted(v.items())) or "0"


def c1_three_assoc():
    P = fixtures.get("three_assoc")
    rep = validate_nassociative(P, 3, 4)
    block = rep.corestriction.per_arity[3]
    aaa_left = P.mult("b", "a")  # (aa)a
    aaa_right = P.mult("a", "b")  # a(aa)
    ok = block.l == 4 and block.matrix_zero and block.tree_zero and rep.proper and aaa_left == {"c": 1} and aaa_right == {"d": 1}
    return ok, f"tree identity on 4^4 quadruples holds={block.matrix_zero}; (aa)a={_vec(aaa_left)} a(aa)={_vec(aaa_right)}; proper={rep.proper}"


def c2_trees():
    rbt = [len(enumerate_ub(n, 0, n - 1)) for n in range(1, 9)]
    ub = len(enumerate_ub(2, 2, 1))
    rt2 = len(enumerate_arity(2, 2))
    ok = rbt == [1, 1, 2, 5, 14, 42, 132, 429] and ub == 6 and rt2 == 3
    return ok, f"|RBT_n| = {rbt}; |RT_2^(2,1)| = {ub}; |RT_2^2| = {rt2}"


def c3_operads():
    bad = []
    for N in (1, 2, 3, 4):
        for n, row in oc.ndga_dims(N, 4).items():
            if row["dim"] != math.factorial(n) * N**n:
                bad.append(f"dim N={N} n={n}")
            want = math.factorial(n) if N % 2 else (0 if n >= 2 else None)
            if want is not None and row["superdim"] != want:
                bad.append(f"sdim N={N} n={n}")
    a2 = oc.assN_dims(2)[3]["dim"]
    a3 = oc.assN_dims(3)[4]["dim"]
    if (a2, a3) != (6, 96):
        bad.append(f"ass dims {a2}, {a3}")
    series = []
    for N in (1, 2, 3):
        for kind in ("ndga", "ndgla"):
            rep = oc.series_check(kind, N, 6)
            series.append(rep.passed)
            if not rep.passed:
                bad.append(f"series {kind} N={N} at {rep.mismatches}")
    return not bad, f"normal forms N<=4 n<=4; ass^2(3)={a2}, ass^3(4)={a3}; {sum(series)}/{len(series)} series to order 6" + (f"; bad: {bad}" if bad else "")


def c4_mc_classical():
    t2 = mc_coefficients(2, 2)
    t3 = mc_coefficients(2, 3)
    show = lambda t, k: {str(s): int(c) for s, c in t.assembled[k]}
    ok = (
        show(t2, 0) == {"(1)": 1, "(0,0)": 1}
        and t2.c(0) == 0
        and show(t3, 1) == {"(1)": 1, "(0,0)": 1}
        and show(t3, 0) == {"(1,0)": 1, "(0,0,0)": 1}
        and t3.c(0, 1) == 0
    )
    return ok, f"(2,2): c_0={show(t2, 0)}, c((0),2)={t2.c(0)}; (2,3): c_1={show(t3, 1)}, c_0={show(t3, 0)}, c((0,1),3)={t3.c(0, 1)}"


MC_SUITE = [(2, 4), (3, 3), (3, 4), (2, 5), (3, 5), (4, 4)]


def c5_mc_oracle():
    mandatory = {nm: nc_oracle(*nm).equal for nm in ((2, 2), (2, 3))}
    suite = {nm: ("EQUAL" if nc_oracle(*nm).equal else "DIFFERENT") for nm in MC_SUITE}
    recorded = {}
    if FINDINGS.exists():
        for m in re.finditer(r"\(N, M\) = \((\d), (\d)\): (EQUAL|DIFFERENT)", FINDINGS.read_text()):
            recorded[(int(m.group(1)), int(m.group(2)))] = m.group(3)
    in_findings = all(recorded.get(nm) == v for nm, v in suite.items())
    ok = all(mandatory.values()) and in_findings
    return ok, f"mandatory {mandatory}; suite {suite}; recorded in findings.md: {in_findings}"


def c6_end():
    rng = random.Random(6)
    bound_ok = True
    proper = {}
    for N in (1, 2, 3):
        if N > 1:
            proper[N] = 0
        for _ in range(150):
            C = random_ncomplex(rng, N, rng.randint(1, 3))
            order = end_nilpotency(end_dga(C, N), 2 * N - 1)
            bound_ok &= order is not None and order <= 2 * N - 1
            if N > 1:
                proper[N] += order == 2 * N - 1
    ok = bound_ok and proper[2] > 0
    return ok, (
        f"d^(2N-1)=0 on 450 random C: {bound_ok}; instances with d^(2N-2)!=0: {proper}; "
        "for N=2 the graded commutator gives d^2 = [δ^2, -] = 0, so no proper instance exists"
    )


# fixtures whose lift is strictly nilpotent, so that every t_k is defined
TELESCOPE = ["point", "three_assoc", "unital1", "zero_mult", "dual_numbers", "upper_triangular", "unit_dga", "exterior1", "idempotent_null"]


def c7_telescoping():
    checked, skipped, bad = [], [], []
    for name in sorted(fixtures.ALL):
        P = fixtures.get(name)
        if P.diff is None and P.mult is None:
            skipped.append(name)
            continue
        try:
            C1, C2 = deformation_spaces(P)
            T1, _ = t1_operator(P, C1, C2)
            for k in (P.N, P.N + 1):
                Tk, _ = t_operator(P, k, C2)
                if not (Tk @ T1).is_zero():
                    bad.append((name, k))
            for M in (P.N, P.N + 1):
                inc, _ = kernel_inclusion(P, M)
                if not inc:
                    bad.append((name, "ker", M))
            checked.append(name)
        except NotNilpotentError:
            skipped.append(name)
    H = cohomology_HNM(fixtures.get("unital1"), 2, 3).dim_H
    ok = not bad and H == 0 and set(TELESCOPE) <= set(checked)
    return ok, f"t_k·t_1 = 0 and ker inclusion on {len(checked)} fixtures; not strictly nilpotent (t_k undefined): {skipped}; H^2_(2,3)(unital1) = {H}"


def c8_tensor():
    _, r1 = tensor_product_structure(fixtures.get("unit_dga"), fixtures.get("dual_numbers"), L=4)
    _, r2 = tensor_product_structure(fixtures.get("three_assoc"), fixtures.get("unital1"), L=4)
    ok = r1.holds and r1.target == 3 and r2.holds and r2.target == 4
    return ok, f"unit_dga⊗dual_numbers: order {r1.nilpotency_order} <= 3; three_assoc⊗unital1: order {r2.nilpotency_order} <= 4 (L = 4)"


def c9_separation():
    P = fixtures.get("chain3")
    delta = build_coderivation(shifted_components(P), TruncatedCoalgebra(P.space.shift(1), 4))
    core = corestriction_identities(delta, 3)
    strict = strict_nilpotency(delta, 3)
    ok = core.holds and not strict.holds and strict.first_failure[:2] == (2, 2)
    return ok, f"corestriction at N=3 (arities 1..4): {core.holds}; strict δ^3=0: {strict.holds}, first failure {strict.first_failure}"


def c10_stasheff():
    P = fixtures.get("unit_dga")
    ms = shifted_components(P)
    delta = build_coderivation(ms, TruncatedCoalgebra(P.space.shift(1), 4))
    same = all(stasheff_operator(ms, l).matrix() == delta.carrier.block(delta.power(2), l, 1) for l in range(1, 5))
    rep = validate_ainfN(P, 2, 4)
    ok = same and rep.corestriction.holds and rep.corestriction.routes_agree
    return ok, f"unit_dga: corestriction blocks of δ^2 equal the Stasheff operators for l=1..4: {same}; identities hold: {rep.corestriction.holds}"


def c11_deformation():
    P = fixtures.get("dual_numbers")
    f = GradedMultiMap(P.space, 2, P.space, 0, {("e", "e"): {"1": 1}})
    g = GradedMultiMap(P.space, 2, P.space, 0, {("e", "1"): {"1": 1}})
    cocycle = hochschild_differential(P.mult, f).is_zero()
    non = not hochschild_differential(P.mult, g).is_zero()
    rf = full_check(P, {1: {2: shift_product(f)}}, 2, 2)
    rg = full_check(P, {1: {2: shift_product(g)}}, 2, 2)
    ok = cocycle and non and rf.deformation and rf.h1_matches_tM and not rg.deformation and rg.h1_matches_tM and bool(rg.residual_h1)
    return ok, f"cocycle e·e->1: passes={rf.deformation}, equals t_2={rf.h1_matches_tM}; non-cocycle e·1->1: passes={rg.deformation}, residual h·t_2(f)={rg.residual_h1}"


def c12_kapranov():
    h3 = kapranov_cohomology(fixtures.get("chain3"))
    h0 = kapranov_cohomology(fixtures.get("point"))
    ok = h3 == {1: 0, 2: 0} and h0 == {1: 1, 2: 1}
    return ok, f"chain3: {h3}; point: {h0}"


CRITERIA = [
    (1, "three_assoc 3-associative and proper", 1.0, c1_three_assoc),
    (2, "tree counts", 1.0, c2_trees),
    (3, "operad dimensions and series", 30.0, c3_operads),
    (4, "MC classical limit", 1.0, c4_mc_classical),
    (5, "DP/oracle agreement", 30.0, c5_mc_oracle),
    (6, "End(C) bound and proper N=2 instance", 30.0, c6_end),
    (7, "telescoping and cohomology", 30.0, c7_telescoping),
    (8, "tensor-product nilpotency", 30.0, c8_tensor),
    (9, "strict vs corestriction separation", 1.0, c9_separation),
    (10, "A-infinity recovery", 5.0, c10_stasheff),
    (11, "deformation round-trip", 10.0, c11_deformation),
    (12, "Kapranov cohomology", 1.0, c12_kapranov),
]


def evaluate(num, title, budget, fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    ok = ok and dt < budget
    return ok, f"{'PASS' if ok else 'FAIL'} [{num}] {title} ({dt:.2f} s, budget {budget:g} s): {detail}"


@pytest.mark.parametrize("num,title,budget,fn", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(num, title, budget, fn, capsys):
    ok, line = evaluate(num, title, budget, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
