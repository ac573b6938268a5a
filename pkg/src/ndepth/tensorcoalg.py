"""Truncated cotensor coalgebra ``T^{<=L}(A[1])`` and coderivations on it.

A family ``m_k : A[1]^{⊗k} -> A[1]`` lifts to the coderivation

    δ(a_1, ..., a_n) = Σ_k Σ_i (-1)^{|m_k|(|a_1| + ... + |a_{i-1}|)} (a_1, ..., m_k(a_i..a_{i+k-1}), ..., a_n)

with degrees taken in ``A[1]``.  ``T^{<=L}`` is a subcoalgebra preserved by every
coderivation, so all block computations below are exact for lengths ``<= L``.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .exactmath import ZERO, SparseMatrix, format_scalar
from .graded import DegreeError, GradedMultiMap, GradedSpace
from .trees import tree_sum

FULL = "full"
TWO_TRUNCATED = "two-truncated"


class TruncatedCoalgebra:
    """Word basis of ``⊕_{1<=n<=L} A[1]^{⊗n}`` in length-lex order."""

    def __init__(self, base, max_length: int, mode: str = FULL):
        if max_length < 1:
            raise ValueError("truncation length must be >= 1")
        if mode not in (FULL, TWO_TRUNCATED):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == TWO_TRUNCATED and max_length != 2:
            max_length = 2
        self.base = base
        self.max_length = max_length
        self.mode = mode
        self.degrees = base.degrees
        self.words: list[tuple[int, ...]] = []
        self.offsets: dict[int, int] = {}
        for n in range(1, max_length + 1):
            self.offsets[n] = len(self.words)
            self.words.extend(itertools.product(range(base.dim), repeat=n))
        self.index = {w: i for i, w in enumerate(self.words)}

    @classmethod
    def over(cls, A: GradedSpace, max_length: int, mode: str = FULL) -> "TruncatedCoalgebra":
        """Carrier built on the shift ``A[1]``."""
        return cls(A.shift(1), max_length, mode)

    @property
    def dim(self) -> int:
        return len(self.words)

    def length_range(self, n: int) -> range:
        if n not in self.offsets:
            raise ValueError(f"length {n} outside 1..{self.max_length}")
        start = self.offsets[n]
        return range(start, start + self.base.dim**n)

    def word_degree(self, w: tuple[int, ...]) -> int:
        return sum(self.degrees[i] for i in w)

    def word_names(self, w: tuple[int, ...]) -> tuple[str, ...]:
        names = self.base.names
        return tuple(names[i] for i in w)

    def block(self, M: SparseMatrix, from_len: int, to_len: int) -> SparseMatrix:
        return M.submatrix(list(self.length_range(to_len)), list(self.length_range(from_len)))

    def project(self, M: SparseMatrix, to_len: int) -> SparseMatrix:
        """Rows of ``M`` landing in words of length ``to_len`` (all columns kept)."""
        return M.submatrix(list(self.length_range(to_len)), list(range(self.dim)))


def lift(ms: Mapping[int, GradedMultiMap], carrier: TruncatedCoalgebra) -> SparseMatrix:
    """Matrix of the coderivation with components ``ms`` (any degrees, one per component)."""
    deg = carrier.degrees
    index = carrier.index
    rows: dict[int, dict[int, Fraction]] = {}
    items = [(k, m.degree, m.table) for k, m in sorted(ms.items()) if not m.is_zero()]
    for col, w in enumerate(carrier.words):
        n = len(w)
        prefix_deg = [0] * (n + 1)
        for i in range(n):
            prefix_deg[i + 1] = prefix_deg[i] + deg[w[i]]
        for k, mdeg, table in items:
            if k > n:
                continue
            for i in range(n - k + 1):
                outs = table.get(w[i : i + k])
                if not outs:
                    continue
                s = -1 if (mdeg % 2 and prefix_deg[i] % 2) else 1
                head, tail = w[:i], w[i + k :]
                for j, c in outs.items():
                    r = index[head + (j,) + tail]
                    row = rows.setdefault(r, {})
                    v = row.get(col, ZERO) + s * c
                    if v:
                        row[col] = v
                    else:
                        del row[col]
    rows = {r: v for r, v in rows.items() if v}
    return SparseMatrix._trusted(carrier.dim, carrier.dim, rows)


class Coderivation:
    """Coderivation on a truncated carrier, with cached matrix powers."""

    def __init__(self, components: Mapping[int, GradedMultiMap], carrier: TruncatedCoalgebra, matrix: SparseMatrix | None = None):
        self.components = dict(components)
        self.carrier = carrier
        self.matrix = matrix if matrix is not None else lift(self.components, carrier)
        self._powers: dict[int, SparseMatrix] = {0: SparseMatrix.identity(carrier.dim), 1: self.matrix}
        self._lock = threading.Lock()

    def power(self, p: int) -> SparseMatrix:
        if p < 0:
            raise ValueError("negative power")
        with self._lock:
            if p in self._powers:
                return self._powers[p]
            top = max(self._powers)
            M = self._powers[top]
            for q in range(top + 1, p + 1):
                M = self.matrix @ M
                self._powers[q] = M
            return M

    def component_degree(self) -> int:
        degs = {m.degree for m in self.components.values() if not m.is_zero()}
        return degs.pop() if len(degs) == 1 else 1


def build_coderivation(ms: Mapping[int, GradedMultiMap], carrier: TruncatedCoalgebra) -> Coderivation:
    """Lift degree-one components ``m_k`` to a coderivation on ``carrier``."""
    for k, m in ms.items():
        if m.arity != k:
            raise ValueError(f"component m_{k} has arity {m.arity}")
        if m.degree != 1 and not m.is_zero():
            raise DegreeError(f"component m_{k} has degree {m.degree} on A[1], expected 1")
        if k > carrier.max_length:
            raise ValueError(f"m_{k} exceeds truncation length {carrier.max_length}")
        if carrier.mode == TWO_TRUNCATED and k > 2:
            raise ValueError("two-truncated mode accepts only m_1 and m_2")
        if m.domain.basis != carrier.base.basis:
            raise ValueError(f"m_{k} is not defined on the carrier's base space")
    return Coderivation(ms, carrier)


def power_component(delta: Coderivation, p: int, from_len: int, to_len: int) -> SparseMatrix:
    """The ``A[1]^{⊗from_len} -> A[1]^{⊗to_len}`` block of ``δ^p``."""
    L = delta.carrier.max_length
    if not (1 <= from_len <= L and 1 <= to_len <= L):
        raise ValueError(f"lengths must lie in 1..{L}")
    return delta.carrier.block(delta.power(p), from_len, to_len)


# -- nilpotency reports ---------------------------------------------------------


@dataclass
class StrictReport:
    N: int
    truncation: int
    holds: bool
    first_failure: tuple[int, int, tuple[str, ...]] | None = None
    value: dict[str, str] | None = None

    def to_json(self) -> dict:
        return {
            "semantics": "strict",
            "N": self.N,
            "verified_up_to_tensor_length": self.truncation,
            "holds": self.holds,
            "first_failure": None
            if self.first_failure is None
            else {"from_length": self.first_failure[0], "to_length": self.first_failure[1], "word": list(self.first_failure[2])},
            "witness_value": self.value,
        }


def _describe(carrier: TruncatedCoalgebra, col_vec: Mapping[int, Fraction]) -> dict[str, str]:
    return {",".join(carrier.word_names(carrier.words[r])): format_scalar(v) for r, v in sorted(col_vec.items())}


def strict_nilpotency(delta: Coderivation, N: int) -> StrictReport:
    """Whether ``δ^N`` vanishes as a matrix on the truncated carrier."""
    c = delta.carrier
    P = delta.power(N)
    if P.is_zero():
        return StrictReport(N, c.max_length, True)
    # lowest source length, then lowest target length, then first word
    best = None
    for r, row in P.rows().items():
        for col in row:
            key = (len(c.words[col]), len(c.words[r]), col)
            if best is None or key < best:
                best = key
    l, j, col = best
    column = {r: v for r, v in P.column(col).items() if len(c.words[r]) == j}
    return StrictReport(N, c.max_length, False, (l, j, c.word_names(c.words[col])), _describe(c, column))


@dataclass
class ArityVerdict:
    l: int
    matrix_zero: bool
    tree_zero: bool
    agree: bool
    witness: tuple[str, ...] | None = None
    value: dict[str, str] | None = None

    def to_json(self) -> dict:
        return {
            "leaves": self.l,
            "matrix_route_zero": self.matrix_zero,
            "tree_route_zero": self.tree_zero,
            "routes_agree": self.agree,
            "witness": None if self.witness is None else list(self.witness),
            "witness_value": self.value,
        }


@dataclass
class CorestrictionReport:
    N: int
    per_arity: list[ArityVerdict] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(v.matrix_zero for v in self.per_arity)

    @property
    def routes_agree(self) -> bool:
        return all(v.agree for v in self.per_arity)

    def first_failure(self) -> ArityVerdict | None:
        return next((v for v in self.per_arity if not v.matrix_zero), None)

    def to_json(self) -> dict:
        return {
            "semantics": "corestriction",
            "N": self.N,
            "holds": self.holds,
            "routes_agree": self.routes_agree,
            "per_arity": [v.to_json() for v in self.per_arity],
        }


def corestriction_block(delta: Coderivation, N: int, l: int) -> SparseMatrix:
    """Length-one output of ``δ^N`` on ``A[1]^{⊗l}`` (rows: basis of A[1])."""
    return power_component(delta, N, l, 1)


def corestriction_identities(delta: Coderivation, N: int, l_max: int | None = None) -> CorestrictionReport:
    """Evaluate the length-one blocks of ``δ^N`` for ``l = 1..l_max`` by two routes.

    Matrix route: block of the matrix power.  Tree route: weighted sum of the
    compiled tree operators with ``N`` vertices and ``l`` leaves.
    """
    c = delta.carrier
    l_max = c.max_length if l_max is None else l_max
    if l_max > c.max_length:
        raise ValueError(f"l_max={l_max} exceeds truncation {c.max_length}")
    ops = {k: m for k, m in delta.components.items()}
    report = CorestrictionReport(N)
    for l in range(1, l_max + 1):
        B = corestriction_block(delta, N, l)
        if ops:
            T = tree_sum(l, N, ops).matrix()
        else:
            T = SparseMatrix.zeros(B.nrows, B.ncols)
        agree = T == B
        witness = value = None
        if not B.is_zero():
            col, _, _ = B.first_nonzero_column()
            w = c.words[c.offsets[l] + col]
            witness = c.word_names(w)
            value = {c.base.names[r]: format_scalar(v) for r, v in sorted(B.column(col).items())}
        report.per_arity.append(ArityVerdict(l, B.is_zero(), T.is_zero(), agree, witness, value))
    return report


def coderivation_law_defect(delta: Coderivation) -> list[tuple[tuple[str, ...], int]]:
    """Words where ``Δδ != (δ⊗1 + 1⊗δ)Δ`` on the truncated carrier (should be empty).

    Both sides are compared on every split ``w = u|v`` of a word; the sign of
    ``1⊗δ`` on ``u⊗v`` is ``(-1)^{|δ||u|}``.
    """
    c = delta.carrier
    M = delta.matrix
    deg = delta.component_degree()
    bad = []
    cols = M.transpose()
    for col, w in enumerate(c.words):
        image = cols.row(col)
        # left side: deconcatenate δ(w)
        lhs: dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction] = {}
        for r, v in image.items():
            x = c.words[r]
            for cut in range(1, len(x)):
                key = (x[:cut], x[cut:])
                lhs[key] = lhs.get(key, ZERO) + v
        rhs: dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction] = {}
        for cut in range(1, len(w)):
            u, v_ = w[:cut], w[cut:]
            for r, x in cols.row(c.index[u]).items():
                key = (c.words[r], v_)
                rhs[key] = rhs.get(key, ZERO) + x
            s = -1 if (deg % 2 and c.word_degree(u) % 2) else 1
            for r, x in cols.row(c.index[v_]).items():
                key = (u, c.words[r])
                rhs[key] = rhs.get(key, ZERO) + s * x
        lhs = {k: v for k, v in lhs.items() if v}
        rhs = {k: v for k, v in rhs.items() if v}
        if lhs != rhs:
            bad.append((c.word_names(w), len(w)))
    return bad
