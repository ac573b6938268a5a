"""Telescoping operators ``t_k``, the groups ``H_{N,M}`` and deformation checks.

Cochains are multilinear maps ``A[1]^{⊗n} -> A[1]``.  A cochain ``f`` of degree
``|f|`` lifts to a coderivation ``F``; with ``δ`` the codifferential,

    t_k(f) = π_1 Σ_{i=0}^{k-1} δ^i F δ^{k-1-i},     t_1'(g) = π_1 (δ G - (-1)^{|g|} G δ),

where ``π_1`` keeps the length-one output.  ``t_k(t_1'(g)) = π_1(δ^k G ∓ G δ^k)``
vanishes once ``δ^k = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .exactmath import ONE, ZERO, SparseMatrix, format_scalar, hstack, rank, rank_kernel, subquotient_dim
from .graded import GradedMultiMap
from .maurercartan import HMatrix, mc_residual
from .structures import AlgebraPresentation, apply2, shifted_components, unshift_product
from .tensorcoalg import Coderivation, TruncatedCoalgebra, build_coderivation, lift


class NotNilpotentError(ValueError):
    """The structure is not strictly nilpotent where the telescoping argument needs it."""


class CochainSpace:
    """Elementary cochains ``(inputs) -> output`` on ``A[1]``, arities in ``arities``.

    ``degree`` restricts to cochains of one shifted degree.  Basis order: by
    arity, then input tuple (lexicographic), then output index.
    """

    def __init__(self, base: AlgebraPresentation, arities: Iterable[int], degree: int | None = None):
        self.base = base
        self.space = base.space.shift(1)
        self.arities = tuple(sorted(set(arities)))
        self.degree = degree
        degs = self.space.degrees
        d = self.space.dim
        self.basis: list[tuple[tuple[int, ...], int]] = []
        for n in self.arities:
            for ins in itertools.product(range(d), repeat=n):
                for out in range(d):
                    if degree is None or degs[out] - sum(degs[i] for i in ins) == degree:
                        self.basis.append((ins, out))
        self.index = {b: i for i, b in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def cochain_degree(self, j: int) -> int:
        ins, out = self.basis[j]
        degs = self.space.degrees
        return degs[out] - sum(degs[i] for i in ins)

    def element(self, vec: Mapping[int, Fraction]) -> dict[int, GradedMultiMap]:
        """Vector -> ``{arity: map}``; all entries must share one degree."""
        tables: dict[int, dict] = {}
        degs = set()
        for j, c in vec.items():
            if not c:
                continue
            ins, out = self.basis[j]
            degs.add(self.cochain_degree(j))
            tables.setdefault(len(ins), {}).setdefault(ins, {})[out] = c
        if len(degs) > 1:
            raise ValueError("cochain is not homogeneous")
        deg = degs.pop() if degs else (self.degree if self.degree is not None else 0)
        return {n: GradedMultiMap._from_table(self.space, n, self.space, deg, t) for n, t in tables.items()}

    def vector(self, maps: Mapping[int, GradedMultiMap] | GradedMultiMap) -> dict[int, Fraction]:
        if isinstance(maps, GradedMultiMap):
            maps = {maps.arity: maps}
        v = {}
        for n, m in maps.items():
            for ins, outs in m.table.items():
                for out, c in outs.items():
                    if c:
                        key = (ins, out)
                        if key not in self.index:
                            raise ValueError(f"cochain entry {ins}->{out} lies outside this cochain space")
                        v[self.index[key]] = c
        return v

    def describe(self, vec: Mapping[int, Fraction]) -> dict[str, str]:
        names = self.space.names
        return {
            ",".join(names[i] for i in self.basis[j][0]) + "->" + names[self.basis[j][1]]: format_scalar(c)
            for j, c in sorted(vec.items())
            if c
        }


def _carrier_delta(P: AlgebraPresentation, L: int) -> Coderivation:
    return build_coderivation(shifted_components(P), TruncatedCoalgebra(P.space.shift(1), L))


def _require_strict(delta: Coderivation, k: int):
    if not delta.power(k).is_zero():
        raise NotNilpotentError(
            f"δ^{k} != 0 on T^<={delta.carrier.max_length}(A[1]); the telescoping identities need strict nilpotency"
        )


def _corestriction_vector(carrier: TruncatedCoalgebra, M: SparseMatrix, target: CochainSpace) -> dict[int, Fraction]:
    """Length-one rows of ``M`` read as a cochain in ``target``."""
    out: dict[int, Fraction] = {}
    top = carrier.length_range(1)
    T = M.transpose()
    for col, w in enumerate(carrier.words):
        if len(w) not in target.arities:
            if any(r in top for r in T.row(col)):
                raise ValueError(f"output in arity {len(w)} outside the target cochain space")
            continue
        for r, c in T.row(col).items():
            if r in top and c:
                out[target.index[(w, r - top.start)]] = c
    return out


def _lift_cochain(space: CochainSpace, vec, carrier) -> SparseMatrix:
    return lift(space.element(vec), carrier)


def t_operator(
    P: AlgebraPresentation,
    k: int,
    source: CochainSpace,
    target: CochainSpace | None = None,
    check: bool = True,
) -> tuple[SparseMatrix, CochainSpace]:
    """Matrix of ``t_k`` from ``source`` to ``target`` (default: all cochains of arity ``1..L``).

    ``L = max source arity + k - 1`` bounds the arity ``t_k`` can reach with
    components of arity at most 2; higher components raise ``L`` accordingly.
    """
    if k < 1:
        raise ValueError("k >= 1")
    comps = shifted_components(P)
    kmax = max(comps, default=1)
    L = max(source.arities) + (k - 1) * max(kmax - 1, 1) if k > 1 else max(source.arities) + max(kmax - 1, 0)
    delta = _carrier_delta(P, L)
    if check:
        _require_strict(delta, k)
    if target is None:
        target = CochainSpace(P, range(1, L + 1))
    c = delta.carrier
    top = list(c.length_range(1))
    pi = [delta.power(i).submatrix(top, list(range(c.dim))) for i in range(k)]
    cols = []
    for j in range(source.dim):
        F = _lift_cochain(source, {j: ONE}, c)
        acc = None
        for i in range(k):
            term = pi[i] @ F @ delta.power(k - 1 - i)
            acc = term if acc is None else acc + term
        full = SparseMatrix._trusted(c.dim, c.dim, {top[r]: row for r, row in acc.rows().items()})
        cols.append(_corestriction_vector(c, full, target))
    return SparseMatrix.from_columns(target.dim, cols), target


def t1_operator(P: AlgebraPresentation, source: CochainSpace, target: CochainSpace | None = None) -> tuple[SparseMatrix, CochainSpace]:
    """Matrix of ``g -> π_1(δG - (-1)^{|g|} Gδ)``."""
    comps = shifted_components(P)
    kmax = max(comps, default=1)
    L = max(source.arities) + max(kmax - 1, 0)
    delta = _carrier_delta(P, L)
    if target is None:
        target = CochainSpace(P, range(1, L + 1))
    c = delta.carrier
    cols = []
    for j in range(source.dim):
        G = _lift_cochain(source, {j: ONE}, c)
        s = -1 if source.cochain_degree(j) % 2 else 1
        B = delta.matrix @ G - (G @ delta.matrix).scale(s)
        cols.append(_corestriction_vector(c, B, target))
    return SparseMatrix.from_columns(target.dim, cols), target


def deformation_spaces(P: AlgebraPresentation) -> tuple[CochainSpace, CochainSpace]:
    """``(C^1, C^2)``: degree-0 cochains of arity 1..K-1 and degree-1 cochains of arity 1..K.

    ``K`` is the largest arity among the structure maps (at least 2).
    """
    K = max(max(shifted_components(P), default=2), 2)
    return CochainSpace(P, range(1, K), 0), CochainSpace(P, range(1, K + 1), 1)


@dataclass
class CohomologyReport:
    N: int
    M: int
    dim_C1: int
    dim_C2: int
    dim_ker_tM: int
    dim_im_t1: int
    composite_zero: bool

    @property
    def dim_H(self) -> int:
        return self.dim_ker_tM - self.dim_im_t1

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "report": "cohomology_HNM",
            "N": self.N,
            "M": self.M,
            "dim_C1": self.dim_C1,
            "dim_C2": self.dim_C2,
            "dim_ker_tM": self.dim_ker_tM,
            "dim_im_t1": self.dim_im_t1,
            "dim_H": self.dim_H,
            "tM_t1_zero": self.composite_zero,
        }


def _tM_on_C2(P, M, C2):
    T, _ = t_operator(P, M, C2)
    return T


def cohomology_HNM(P: AlgebraPresentation, N: int, M: int) -> CohomologyReport:
    if M < N:
        raise ValueError("need M >= N")
    C1, C2 = deformation_spaces(P)
    T1, _ = t1_operator(P, C1, C2)
    TM = _tM_on_C2(P, M, C2)
    comp = TM @ T1
    if not comp.is_zero():
        i, j, v = comp.first_nonzero()
        raise ValueError(f"t_{M}·t_1 != 0 (entry {i},{j} = {format_scalar(v)}); input structure is invalid")
    dim_H = subquotient_dim(TM, T1)
    rkM = rank(TM)
    rk1 = rank(T1)
    assert dim_H == C2.dim - rkM - rk1
    return CohomologyReport(N, M, C1.dim, C2.dim, C2.dim - rkM, rk1, True)


def kernel_inclusion(P: AlgebraPresentation, M: int) -> tuple[bool, dict | None]:
    """Is every kernel vector of ``t_M`` on ``C^2`` killed by ``t_{M+1}``?"""
    _, C2 = deformation_spaces(P)
    TM = _tM_on_C2(P, M, C2)
    TM1 = _tM_on_C2(P, M + 1, C2)
    _, ker = rank_kernel(TM)
    for v in ker:
        img = TM1.apply(v)
        if any(img.values()):
            return False, C2.describe(v)
    return True, None


# -- independent identity evaluators (unshifted, degree-0 algebras) ---------------


def _unshift_cochain(f2: GradedMultiMap, P: AlgebraPresentation) -> GradedMultiMap:
    return unshift_product(f2, P.space)


def identity_one_defect(mult: GradedMultiMap, f: GradedMultiMap):
    """First quadruple where ``f(ab,c)d + a f(bc,d) + f(a,b)cd = ab f(c,d) + f(a,bc)d + a f(b,cd)`` fails."""
    V = mult.domain
    e = lambda x: {x: ONE}
    for a, b, c, d in itertools.product(V.names, repeat=4):
        ab, bc, cd = mult(a, b), mult(b, c), mult(c, d)
        lhs = apply2(mult, apply2(f, ab, e(c)), e(d))
        _acc(lhs, apply2(mult, e(a), apply2(f, bc, e(d))))
        _acc(lhs, apply2(mult, apply2(mult, f(a, b), e(c)), e(d)))
        rhs = apply2(mult, ab, f(c, d))
        _acc(rhs, apply2(mult, apply2(f, e(a), bc), e(d)))
        _acc(rhs, apply2(mult, e(a), apply2(f, e(b), cd)))
        _acc(lhs, rhs, -ONE)
        if lhs:
            return (a, b, c, d), lhs
    return None


def identity_two_defect(mult: GradedMultiMap, f: GradedMultiMap):
    """First triple where ``f(a,b)c + f(ab,c) = a f(b,c) + f(a,bc)`` fails."""
    V = mult.domain
    e = lambda x: {x: ONE}
    for a, b, c in itertools.product(V.names, repeat=3):
        lhs = apply2(mult, f(a, b), e(c))
        _acc(lhs, apply2(f, mult(a, b), e(c)))
        _acc(lhs, apply2(mult, e(a), f(b, c)), -ONE)
        _acc(lhs, apply2(f, e(a), mult(b, c)), -ONE)
        if lhs:
            return (a, b, c), lhs
    return None


def hochschild_differential(mult: GradedMultiMap, f: GradedMultiMap) -> GradedMultiMap:
    """``(δf)(a,b,c) = a f(b,c) - f(ab,c) + f(a,bc) - f(a,b) c`` for a degree-0 algebra."""
    V = mult.domain
    e = lambda x: {x: ONE}
    coeffs = {}
    for a, b, c in itertools.product(V.names, repeat=3):
        v = apply2(mult, e(a), f(b, c))
        _acc(v, apply2(f, mult(a, b), e(c)), -ONE)
        _acc(v, apply2(f, e(a), mult(b, c)))
        _acc(v, apply2(mult, f(a, b), e(c)), -ONE)
        if v:
            coeffs[(a, b, c)] = v
    return GradedMultiMap(V, 3, V, 0, coeffs)


def _acc(acc, vec, c=ONE):
    for k, v in vec.items():
        s = acc.get(k, ZERO) + c * v
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


# -- proper deformations ----------------------------------------------------------


@dataclass
class Certificate:
    f: GradedMultiMap  # shifted 2-cochain
    f_unshifted: GradedMultiMap
    tM_zero: bool
    tM1_nonzero: bool
    identity_one_holds: bool | None
    identity_two_witness: tuple | None

    def to_json(self) -> dict:
        return {
            "cochain": self.f_unshifted.to_json(),
            "t_M_zero": self.tM_zero,
            "t_M_minus_1_nonzero": self.tM1_nonzero,
            "identity_one_holds": self.identity_one_holds,
            "identity_two_witness": None if self.identity_two_witness is None else list(self.identity_two_witness),
        }


def _stack_columns(mats: list[SparseMatrix], nrows: int) -> SparseMatrix:
    mats = [m for m in mats if m.ncols]
    return hstack(mats) if mats else SparseMatrix.zeros(nrows, 0)


def proper_search(P: AlgebraPresentation, N: int, M: int) -> Certificate | None:
    """An element of ``ker t_M`` outside ``ker t_{M-1} + im t_1`` on 2-cochains, re-verified.

    Only arity-2 deformations of a pure product are searched (the setting of
    the corollary identities).
    """
    if M <= N:
        raise ValueError("need M > N")
    if P.diff is not None and not P.diff.is_zero() or P.higher:
        raise ValueError("proper_search handles algebras with a product only")
    C1 = CochainSpace(P, [1], 0)
    C2 = CochainSpace(P, [2], 1)
    TM = _tM_on_C2(P, M, C2)
    TM1 = _tM_on_C2(P, M - 1, C2)
    T1, _ = t1_operator(P, C1, C2)
    _, kerM = rank_kernel(TM)
    _, kerM1 = rank_kernel(TM1)
    base = _stack_columns([SparseMatrix.from_columns(C2.dim, kerM1), T1], C2.dim)
    r0 = rank(base)
    for v in kerM:
        trial = _stack_columns([base, SparseMatrix.from_columns(C2.dim, [v])], C2.dim)
        if rank(trial) > r0:
            return _certify(P, C2, v, N, M)
    return None


def _certify(P, C2, v, N, M) -> Certificate:
    f = C2.element(v)[2]
    fu = _unshift_cochain(f, P)
    tM, _ = t_operator(P, M, C2)
    tM1, _ = t_operator(P, M - 1, C2)
    col = SparseMatrix.from_columns(C2.dim, [v])
    i1 = identity_one_defect(P.mult, fu) if M == 3 else None
    i2 = identity_two_defect(P.mult, fu)
    return Certificate(
        f,
        fu,
        (tM @ col).is_zero(),
        not (tM1 @ col).is_zero(),
        None if M != 3 else i1 is None,
        None if i2 is None else i2[0],
    )


# -- full deformations -------------------------------------------------------------


@dataclass
class FullCheckReport:
    N: int
    M: int
    p: int
    deformation: bool
    corestriction_zero: bool
    h1_matches_tM: bool | None
    residual_h1: dict[str, str]
    mc_agree: bool | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "report": "full_check",
            "N": self.N,
            "M": self.M,
            "base": f"k[h]/(h^{self.p})",
            "deformation": self.deformation,
            "corestriction_zero": self.corestriction_zero,
            "h1_coefficient_equals_t_M": self.h1_matches_tM,
            "residual_h1": self.residual_h1,
            "mc_residual_agrees": self.mc_agree,
            "notes": list(self.notes),
        }


def full_check(P: AlgebraPresentation, e: Mapping[int, Mapping[int, GradedMultiMap]], N: int, M: int, p: int = 2) -> FullCheckReport:
    """Is ``δ + Σ_j h^j E_j`` ``M``-nilpotent over ``k[h]/(h^p)``?

    ``e[j]`` holds the shifted components (``{arity: map}``) of the ``h^j``
    coefficient.  The ``h^1`` part of ``(δ + hE)^M`` is compared with ``t_M(E_1)``.
    """
    if 0 in e:
        raise ValueError("the deformation must vanish modulo h")
    if not (1 <= p <= 3):
        raise ValueError("p must be 1, 2 or 3")
    K = max([max(shifted_components(P), default=1)] + [max(c) for c in e.values() if c] + [2])
    L = M + 1 if K <= 2 else (M - 1) * (K - 1) + 2
    delta = _carrier_delta(P, L)
    _require_strict(delta, N)
    c = delta.carrier
    n = c.dim
    E = {j: lift(comps, c) for j, comps in e.items() if j < p}
    total = HMatrix([delta.matrix] + [E.get(j, SparseMatrix.zeros(n, n)) for j in range(1, p)], p)
    Pw = HMatrix.identity(n, p)
    for _ in range(M):
        Pw = total @ Pw
    top = list(c.length_range(1))
    core_zero = all(m.submatrix(top, list(range(n))).is_zero() for m in Pw.coeffs)

    h1_matches = None
    residual = {}
    target = CochainSpace(P, range(1, L + 1))
    if p >= 2:
        h1 = Pw.coeffs[1]
        res_vec = _corestriction_vector(c, SparseMatrix._trusted(n, n, {r: row for r, row in h1.rows().items() if r in set(top)}), target)
        residual = target.describe(res_vec)
        if 1 in e:
            arities = sorted(e[1])
            src = CochainSpace(P, arities)
            T, _ = t_operator(P, M, src, target, check=False)
            tm = T.apply(src.vector(e[1]))
            h1_matches = {j: v for j, v in tm.items() if v} == {j: v for j, v in res_vec.items() if v}
    rep = FullCheckReport(N, M, p, Pw.is_zero(), core_zero, h1_matches, residual)
    if p == 3 or p == 2:
        eco = {j: Coderivation(comps, c, E[j]) for j, comps in e.items() if j < p}
        mc = mc_residual(delta, eco, N, M, p)
        rep.mc_agree = mc.direct == rep.deformation
        if not mc.agree:
            rep.notes.append("direct power and assembled equation disagree on this instance")
    rep.notes.append(f"verified on T^<={L}(A[1])")
    return rep
