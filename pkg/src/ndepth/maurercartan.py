"""The (N, M) Maurer-Cartan coefficients.

Expanding ``(δ + e)^M`` and moving every ``δ`` to the right with
``δ f = d(f) + (-1)^{|f|} f δ`` (``d`` the graded commutator with ``δ``) gives

    (δ + e)^M = Σ_s c(s, M) e^{(s)} δ^{M(s)},   e^{(s)} = d^{s_1}(e) ... d^{s_n}(e),

where ``c(s, M)`` is a signed count of paths of length ``M`` from the empty
composition to ``s``.  Each step left-multiplies by ``e`` (prepend a 0), by
``δ`` passing through (loop) or by ``δ`` acting as ``d`` on the ``i``-th factor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .exactmath import ONE, ZERO, SparseMatrix, format_scalar
from .tensorcoalg import Coderivation


# -- compositions -------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Composition:
    parts: tuple[int, ...] = ()

    @classmethod
    def of(cls, *parts: int) -> "Composition":
        return cls(tuple(parts))

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def before(self, i: int) -> tuple[int, ...]:
        """``s_{<i}`` for 1-based ``i``."""
        return self.parts[: i - 1]

    def after(self, i: int) -> tuple[int, ...]:
        """``s_{>i}`` for 1-based ``i``."""
        return self.parts[i:]

    def slack(self, M: int) -> int:
        """``M(s) = M - |s| - l(s)``."""
        return M - self.size - self.length

    def prepend_zero(self) -> "Composition":
        return Composition((0,) + self.parts)

    def bump(self, i: int) -> "Composition":
        p = list(self.parts)
        p[i - 1] += 1
        return Composition(tuple(p))

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")" if self.parts else "∅"


EMPTY = Composition()


def in_E(s: Composition, M: int) -> bool:
    return s.size + s.length <= M


def E_M(M: int) -> list[Composition]:
    """All compositions with ``|s| + l(s) <= M``."""
    out = []
    for n in range(0, M + 1):
        for parts in itertools.product(range(M + 1), repeat=n):
            s = Composition(parts)
            if in_E(s, M):
                out.append(s)
    return sorted(out, key=lambda s: (s.length, s.parts))


def out_edges(s: Composition):
    """``(target, weight)`` for every edge leaving ``s``."""
    yield s.prepend_zero(), 1
    yield s, -1 if (s.size + s.length) % 2 else 1
    for i in range(1, s.length + 1):
        yield s.bump(i), -1 if (sum(s.before(i)) + i - 1) % 2 else 1


# -- the dynamic program ---------------------------------------------------------------


@dataclass
class MCTable:
    N: int
    M: int
    entries: dict[Composition, Fraction]
    assembled: dict[int, list[tuple[Composition, Fraction]]] = field(default_factory=dict)

    def c(self, *parts: int) -> Fraction:
        return self.entries.get(Composition(tuple(parts)), ZERO)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "report": "mc_coefficients",
            "N": self.N,
            "M": self.M,
            "rows": [
                {"s": list(s.parts), "size": s.size, "length": s.length, "M(s)": s.slack(self.M), "c": format_scalar(c)}
                for s, c in sorted(self.entries.items(), key=lambda kv: (kv[0].length, kv[0].parts))
            ],
            "c_k": {str(k): [[list(s.parts), format_scalar(c)] for s, c in terms] for k, terms in sorted(self.assembled.items())},
        }


def path_sums(M: int) -> dict[Composition, Fraction]:
    """``c(s, M)`` for all ``s`` by layered sums over path length."""
    layer = {EMPTY: ONE}
    for _ in range(M):
        nxt: dict[Composition, Fraction] = {}
        for s, c in layer.items():
            for t, w in out_edges(s):
                nxt[t] = nxt.get(t, ZERO) + w * c
        layer = {s: c for s, c in nxt.items()}
    return layer


def mc_coefficients(N: int, M: int) -> MCTable:
    if not (1 <= N <= M <= 8):
        raise ValueError("need 1 <= N <= M <= 8")
    raw = path_sums(M)
    entries = {s: c for s, c in raw.items() if c}
    assembled: dict[int, list[tuple[Composition, Fraction]]] = {k: [] for k in range(M)}
    for s, c in sorted(entries.items(), key=lambda kv: (kv[0].length, kv[0].parts)):
        k = s.slack(M)
        if k <= M - 1 and all(p < N for p in s.parts):
            assembled[k].append((s, c))
    return MCTable(N, M, entries, assembled)


def brute_force_paths(M: int) -> dict[Composition, Fraction]:
    """Explicit enumeration of every path of length ``M`` (oracle for the DP)."""
    out: dict[Composition, Fraction] = {}

    def walk(s, w, steps):
        if steps == 0:
            out[s] = out.get(s, ZERO) + w
            return
        for t, x in out_edges(s):
            walk(t, w * x, steps - 1)

    walk(EMPTY, ONE, M)
    return {s: c for s, c in out.items() if c}


def path_counts(M: int) -> dict[Composition, int]:
    """Unsigned ``|P_M(∅, s)|``."""
    layer = {EMPTY: 1}
    for _ in range(M):
        nxt: dict[Composition, int] = {}
        for s, c in layer.items():
            for t, _w in out_edges(s):
                nxt[t] = nxt.get(t, 0) + c
        layer = nxt
    return layer


# -- noncommutative oracle ---------------------------------------------------------


class NCPolynomial:
    """Polynomial in the odd letters ``D`` (for δ) and ``E`` (for e) modulo ``D^N``."""

    __slots__ = ("N", "terms")

    def __init__(self, N: int, terms: Mapping[str, Fraction] | None = None):
        self.N = N
        self.terms: dict[str, Fraction] = {}
        for w, c in (terms or {}).items():
            self._add(w, Fraction(c))

    def _add(self, w: str, c: Fraction):
        if not c or "D" * self.N in w:
            return
        v = self.terms.get(w, ZERO) + c
        if v:
            self.terms[w] = v
        else:
            self.terms.pop(w, None)

    @classmethod
    def letter(cls, N: int, x: str) -> "NCPolynomial":
        return cls(N, {x: ONE})

    @classmethod
    def one(cls, N: int) -> "NCPolynomial":
        return cls(N, {"": ONE})

    def __add__(self, other):
        out = NCPolynomial(self.N, self.terms)
        for w, c in other.terms.items():
            out._add(w, c)
        return out

    def scale(self, c) -> "NCPolynomial":
        return NCPolynomial(self.N, {w: c * v for w, v in self.terms.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        out = NCPolynomial(self.N)
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                out._add(a + b, ca * cb)
        return out

    def __eq__(self, other):
        return isinstance(other, NCPolynomial) and self.N == other.N and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def homogeneous_degree(self) -> int:
        degs = {len(w) for w in self.terms}
        if len(degs) > 1:
            raise ValueError("inhomogeneous polynomial")
        return degs.pop() if degs else 0

    def to_json(self) -> list:
        return [[w, format_scalar(c)] for w, c in sorted(self.terms.items())]

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{format_scalar(c)}*{w or '1'}" for w, c in sorted(self.terms.items()))


def ad(f: NCPolynomial) -> NCPolynomial:
    """Graded commutator ``D f - (-1)^{|f|} f D``."""
    D = NCPolynomial.letter(f.N, "D")
    s = -1 if f.homogeneous_degree() % 2 else 1
    return D * f - (f * D).scale(s)


def e_derivative(N: int, a: int) -> NCPolynomial:
    p = NCPolynomial.letter(N, "E")
    for _ in range(a):
        p = ad(p)
    return p


def e_word(N: int, s: Composition) -> NCPolynomial:
    p = NCPolynomial.one(N)
    for a in s.parts:
        p = p * e_derivative(N, a)
    return p


@dataclass
class OracleResult:
    N: int
    M: int
    lhs: NCPolynomial
    rhs: NCPolynomial

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    @property
    def difference(self) -> NCPolynomial:
        return self.lhs - self.rhs

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "verdict": "EQUAL" if self.equal else "DIFFERENT",
            "difference": self.difference.to_json(),
        }


def nc_oracle(N: int, M: int, table: MCTable | None = None) -> OracleResult:
    """``(D + E)^M`` against ``Σ_{k<M} Σ_{s: M(s)=k, s_i<N} c(s,M) e^{(s)} D^k``."""
    table = table or mc_coefficients(N, M)
    X = NCPolynomial.letter(N, "D") + NCPolynomial.letter(N, "E")
    lhs = NCPolynomial.one(N)
    for _ in range(M):
        lhs = lhs * X
    rhs = NCPolynomial(N)
    for k, terms in table.assembled.items():
        Dk = NCPolynomial(N, {"D" * k: ONE})
        for s, c in terms:
            rhs = rhs + (e_word(N, s) * Dk).scale(c)
    return OracleResult(N, M, lhs, rhs)


def dropped_terms(table: MCTable) -> list[tuple[Composition, Fraction]]:
    """Entries left out of the assembled equation (some ``s_i >= N``, or ``s = ∅``)."""
    return [
        (s, c)
        for s, c in sorted(table.entries.items(), key=lambda kv: (kv[0].length, kv[0].parts))
        if s.slack(table.M) > table.M - 1 or any(p >= table.N for p in s.parts)
    ]


# -- residuals over k[h]/(h^p) ---------------------------------------------------


class HMatrix:
    """Matrix with coefficients in ``k[h]/(h^p)``, stored as ``[M_0, M_1, ..., M_{p-1}]``."""

    def __init__(self, coeffs: list[SparseMatrix], p: int):
        n = coeffs[0].nrows
        self.p = p
        self.coeffs = (list(coeffs) + [SparseMatrix.zeros(n, n)] * p)[:p]

    @property
    def n(self):
        return self.coeffs[0].nrows

    def __add__(self, other):
        return HMatrix([a + b for a, b in zip(self.coeffs, other.coeffs)], self.p)

    def __sub__(self, other):
        return HMatrix([a - b for a, b in zip(self.coeffs, other.coeffs)], self.p)

    def __matmul__(self, other):
        out = [SparseMatrix.zeros(self.n, self.n) for _ in range(self.p)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs[: self.p - i]):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a @ b
        return HMatrix(out, self.p)

    def scale(self, c):
        return HMatrix([a.scale(c) for a in self.coeffs], self.p)

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)

    def support(self) -> set[tuple[int, int, int]]:
        """``(h-power, row, col)`` of every nonzero entry."""
        return {(k, i, j) for k, a in enumerate(self.coeffs) for i, j, _ in a.entries()}

    @classmethod
    def identity(cls, n, p):
        return cls([SparseMatrix.identity(n)], p)


@dataclass
class ResidualReport:
    N: int
    M: int
    p: int
    direct: bool
    via_equation: bool
    direct_support: set
    equation_support: set

    @property
    def agree(self) -> bool:
        return self.direct == self.via_equation

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "base": f"k[h]/(h^{self.p})",
            "direct_zero": self.direct,
            "equation_zero": self.via_equation,
            "agree": self.agree,
            "same_support": self.direct_support == self.equation_support,
        }


def mc_residual(delta: Coderivation, e: Mapping[int, Coderivation], N: int, M: int, p: int = 2) -> ResidualReport:
    """Both sides of the (N, M) equation for ``δ + e``, ``e = Σ_{j>=1} h^j e_j``.

    ``e`` maps powers of ``h`` to coderivations on ``delta``'s carrier; a
    ``0`` key would mean ``e`` does not reduce to zero mod ``h``.
    """
    if p > 3 or p < 1:
        raise ValueError("base ring k[h]/(h^p) needs 1 <= p <= 3")
    if any(j <= 0 for j in e):
        raise ValueError("e must lie in the ideal (h): it may not have an h^0 component")
    if not delta.power(N).is_zero():
        raise ValueError(f"δ^{N} != 0 on the carrier: the equation needs strict nilpotency")
    n = delta.carrier.dim
    D = HMatrix([delta.matrix], p)
    E = HMatrix([SparseMatrix.zeros(n, n)] + [e[j].matrix if j in e else SparseMatrix.zeros(n, n) for j in range(1, p)], p)
    total = D + E
    P = HMatrix.identity(n, p)
    for _ in range(M):
        P = total @ P

    # e is odd: d(f) = δ f - (-1)^{|f|} f δ, and d^a(e) has parity a + 1
    derivs = [E]
    table = mc_coefficients(N, M)
    top = max((max(s.parts, default=0) for terms in table.assembled.values() for s, _ in terms), default=0)
    for a in range(1, top + 1):
        f = derivs[-1]
        s = -1 if a % 2 else 1  # parity of d^{a-1}(e) is a
        derivs.append(D @ f - (f @ D).scale(s))
    R = HMatrix([SparseMatrix.zeros(n, n)], p)
    Dpow = [HMatrix.identity(n, p)]
    for _ in range(M):
        Dpow.append(D @ Dpow[-1])
    for k, terms in table.assembled.items():
        for s, c in terms:
            w = HMatrix.identity(n, p)
            for a in s.parts:
                w = w @ derivs[a]
            R = R + (w @ Dpow[k]).scale(c)
    return ResidualReport(N, M, p, P.is_zero(), R.is_zero(), P.support(), R.support())
