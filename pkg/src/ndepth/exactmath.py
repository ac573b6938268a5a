"""Exact rational scalars and sparse matrices.

Everything downstream is an exact polynomial identity, so the only number type
is :class:`fractions.Fraction`.  Matrices are stored row-wise as dictionaries
and never hold explicit zeros.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def to_scalar(value) -> Fraction:
    """Parse an int, a Fraction or a ``"p/q"`` string exactly.

    Floats are refused: a float has already lost the exact value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty scalar string")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {value!r}") from exc
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; write it as a 'p/q' string")
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_scalar(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class SparseMatrix:
    """Immutable sparse matrix over the rationals.

    ``rows`` maps a row index to a ``{col: value}`` dict of nonzero entries.
    """

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows: int, ncols: int, rows: Mapping[int, Mapping[int, object]] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative dimension")
        self.nrows = nrows
        self.ncols = ncols
        clean: dict[int, dict[int, Fraction]] = {}
        if rows:
            for i, row in rows.items():
                if not 0 <= i < nrows:
                    raise IndexError(f"row {i} out of range for {nrows} rows")
                r = {}
                for j, v in row.items():
                    if not 0 <= j < ncols:
                        raise IndexError(f"column {j} out of range for {ncols} columns")
                    v = to_scalar(v)
                    if v:
                        r[j] = v
                if r:
                    clean[i] = r
        self._rows = clean

    @classmethod
    def _trusted(cls, nrows: int, ncols: int, rows: dict[int, dict[int, Fraction]]) -> "SparseMatrix":
        # rows must already be zero-free Fractions
        m = cls.__new__(cls)
        m.nrows = nrows
        m.ncols = ncols
        m._rows = rows
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "SparseMatrix":
        return cls._trusted(nrows, ncols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls._trusted(n, n, {i: {i: ONE} for i in range(n)})

    @classmethod
    def from_dense(cls, data: Iterable[Iterable[object]]) -> "SparseMatrix":
        data = [list(r) for r in data]
        nrows = len(data)
        ncols = len(data[0]) if data else 0
        rows = {}
        for i, r in enumerate(data):
            if len(r) != ncols:
                raise ValueError("ragged dense matrix")
            rows[i] = {j: v for j, v in enumerate(r)}
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, nrows: int, columns: list[Mapping[int, Fraction]]) -> "SparseMatrix":
        rows: dict[int, dict[int, Fraction]] = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rows.setdefault(i, {})[j] = to_scalar(v)
        return cls._trusted(nrows, len(columns), rows)

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def rows(self) -> dict[int, dict[int, Fraction]]:
        return self._rows

    def row(self, i: int) -> dict[int, Fraction]:
        return self._rows.get(i, {})

    def get(self, i: int, j: int) -> Fraction:
        return self._rows.get(i, {}).get(j, ZERO)

    def entries(self):
        for i in sorted(self._rows):
            r = self._rows[i]
            for j in sorted(r):
                yield i, j, r[j]

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def is_zero(self) -> bool:
        return not self._rows

    def first_nonzero(self):
        """Lowest (row, col, value) entry in row-major order, or None."""
        if not self._rows:
            return None
        i = min(self._rows)
        j = min(self._rows[i])
        return i, j, self._rows[i][j]

    def first_nonzero_column(self):
        """Lowest (col, row, value) entry in column-major order, or None."""
        best = None
        for i, r in self._rows.items():
            for j, v in r.items():
                if best is None or (j, i) < (best[0], best[1]):
                    best = (j, i, v)
        return best

    def to_dense(self) -> list[list[Fraction]]:
        out = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for i, r in self._rows.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    def column(self, j: int) -> dict[int, Fraction]:
        return {i: r[j] for i, r in self._rows.items() if j in r}

    # -- algebra ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.nrows, self.ncols, frozenset((i, frozenset(r.items())) for i, r in self._rows.items())))

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix._trusted(self.nrows, self.ncols, {i: {j: -v for j, v in r.items()} for i, r in self._rows.items()})

    def scale(self, c) -> "SparseMatrix":
        c = to_scalar(c)
        if not c:
            return SparseMatrix.zeros(self.nrows, self.ncols)
        return SparseMatrix._trusted(self.nrows, self.ncols, {i: {j: c * v for j, v in r.items()} for i, r in self._rows.items()})

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        rows = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            acc = rows.setdefault(i, {})
            for j, v in r.items():
                s = acc.get(j, ZERO) + v
                if s:
                    acc[j] = s
                else:
                    acc.pop(j, None)
            if not acc:
                del rows[i]
        return SparseMatrix._trusted(self.nrows, self.ncols, rows)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other._rows
        out: dict[int, dict[int, Fraction]] = {}
        for i, r in self._rows.items():
            acc: dict[int, Fraction] = {}
            for k, a in r.items():
                rk = orows.get(k)
                if not rk:
                    continue
                for j, b in rk.items():
                    acc[j] = acc.get(j, ZERO) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out[i] = acc
        return SparseMatrix._trusted(self.nrows, other.ncols, out)

    def apply(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Matrix times a sparse column vector."""
        out = {}
        for i, r in self._rows.items():
            s = ZERO
            for j, v in r.items():
                x = vec.get(j)
                if x:
                    s += v * x
            if s:
                out[i] = s
        return out

    def transpose(self) -> "SparseMatrix":
        rows: dict[int, dict[int, Fraction]] = {}
        for i, r in self._rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        return SparseMatrix._trusted(self.ncols, self.nrows, rows)

    def submatrix(self, row_ids: list[int], col_ids: list[int]) -> "SparseMatrix":
        cpos = {c: k for k, c in enumerate(col_ids)}
        rows = {}
        for a, i in enumerate(row_ids):
            r = self._rows.get(i)
            if not r:
                continue
            sub = {cpos[j]: v for j, v in r.items() if j in cpos}
            if sub:
                rows[a] = sub
        return SparseMatrix._trusted(len(row_ids), len(col_ids), rows)

    def permute_rows(self, perm: list[int]) -> "SparseMatrix":
        """Row i of the result is row ``perm[i]`` of self."""
        inv = {old: new for new, old in enumerate(perm)}
        return SparseMatrix._trusted(self.nrows, self.ncols, {inv[i]: dict(r) for i, r in self._rows.items()})

    def power(self, p: int) -> "SparseMatrix":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        out = SparseMatrix.identity(self.nrows)
        for _ in range(p):
            out = self @ out
        return out


def hstack(mats: list[SparseMatrix]) -> SparseMatrix:
    if not mats:
        raise ValueError("nothing to stack")
    nrows = mats[0].nrows
    rows: dict[int, dict[int, Fraction]] = {}
    off = 0
    for m in mats:
        if m.nrows != nrows:
            raise ValueError("row count mismatch in hstack")
        for i, r in m.rows().items():
            tgt = rows.setdefault(i, {})
            for j, v in r.items():
                tgt[j + off] = v
        off += m.ncols
    return SparseMatrix._trusted(nrows, off, rows)


def vstack(mats: list[SparseMatrix]) -> SparseMatrix:
    if not mats:
        raise ValueError("nothing to stack")
    ncols = mats[0].ncols
    rows = {}
    off = 0
    for m in mats:
        if m.ncols != ncols:
            raise ValueError("column count mismatch in vstack")
        for i, r in m.rows().items():
            rows[i + off] = dict(r)
        off += m.nrows
    return SparseMatrix._trusted(off, ncols, rows)


# -- elimination ---------------------------------------------------------------


def _echelon(M: SparseMatrix, reduce: bool):
    """Gaussian elimination column by column.

    Pivot choice: among unused rows with a nonzero in the current column take
    the sparsest, ties broken by lowest row index.  Returns the pivot list
    ``[(col, row_dict)]`` with pivot entries normalised to 1; with ``reduce``
    the pivot columns are also cleared above (reduced row echelon form).
    """
    work: dict[int, dict[int, Fraction]] = {i: dict(r) for i, r in M.rows().items()}
    by_col: dict[int, set[int]] = {}
    for i, r in work.items():
        for j in r:
            by_col.setdefault(j, set()).add(i)

    pivots: list[tuple[int, int]] = []  # (col, row id)
    used: set[int] = set()
    for c in sorted(by_col):
        cand = [i for i in by_col.get(c, ()) if i not in used]
        if not cand:
            continue
        p = min(cand, key=lambda i: (len(work[i]), i))
        prow = work[p]
        inv = ONE / prow[c]
        if inv != ONE:
            for j in prow:
                prow[j] *= inv
        used.add(p)
        pivots.append((c, p))
        targets = [i for i in by_col[c] if i != p and (reduce or i not in used)]
        for i in targets:
            row = work[i]
            f = row[c]
            for j, v in prow.items():
                nv = row.get(j, ZERO) - f * v
                if nv:
                    if j not in row:
                        by_col.setdefault(j, set()).add(i)
                    row[j] = nv
                else:
                    if j in row:
                        del row[j]
                        by_col[j].discard(i)
    return [(c, work[p]) for c, p in pivots]


def rank(M: SparseMatrix) -> int:
    return len(_echelon(M, reduce=False))


def rank_kernel(M: SparseMatrix) -> tuple[int, list[dict[int, Fraction]]]:
    """Rank and a kernel basis of ``M``.

    Kernel vectors are sparse ``{col: value}`` dicts, one per free column, with
    a 1 in that free column.
    """
    piv = _echelon(M, reduce=True)
    pivot_cols = {c for c, _ in piv}
    kernel = []
    for f in range(M.ncols):
        if f in pivot_cols:
            continue
        v = {f: ONE}
        for c, row in piv:
            x = row.get(f)
            if x:
                v[c] = -x
        kernel.append(v)
    return len(piv), kernel


def kernel_matrix(M: SparseMatrix) -> SparseMatrix:
    """Kernel basis as the columns of a matrix."""
    _, ker = rank_kernel(M)
    return SparseMatrix.from_columns(M.ncols, ker)


def in_span(vectors: list[Mapping[int, Fraction]], v: Mapping[int, Fraction], dim: int) -> bool:
    if not any(v.values()):
        return True
    base = SparseMatrix.from_columns(dim, list(vectors)) if vectors else SparseMatrix.zeros(dim, 0)
    both = SparseMatrix.from_columns(dim, list(vectors) + [v])
    return rank(both) == (rank(base) if vectors else 0)


class SubquotientError(ValueError):
    """The product A·B was nonzero, so im B is not inside ker A."""


def subquotient_dim(A: SparseMatrix, B: SparseMatrix) -> int:
    """``dim ker A - rank B`` after checking ``A @ B == 0``."""
    if A.ncols != B.nrows:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    prod = A @ B
    if not prod.is_zero():
        i, j, v = prod.first_nonzero()
        raise SubquotientError(f"A·B is nonzero (entry ({i},{j}) = {format_scalar(v)}); image of B is not in ker A")
    return A.ncols - rank(A) - rank(B)
