"""Graded vector spaces with named bases and homogeneous multilinear maps."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactmath import ONE, ZERO, SparseMatrix, format_scalar, to_scalar


class DegreeError(ValueError):
    """A structure constant violates the declared degree of its map."""


def sign_parity(degrees_moved_past: Iterable[int], degree_moving: int) -> int:
    """Parity (0 or 1) of the Koszul sign for moving past ``degrees_moved_past``."""
    if degree_moving % 2 == 0:
        return 0
    return sum(degrees_moved_past) % 2


def koszul_sign(degrees_moved_past: Iterable[int], degree_moving: int) -> Fraction:
    """``(-1) ** (degree_moving * sum(degrees_moved_past))``."""
    return -ONE if sign_parity(degrees_moved_past, degree_moving) else ONE


@dataclass(frozen=True)
class GradedSpace:
    """Finite graded vector space given by an ordered basis of ``(name, degree)``."""

    basis: tuple[tuple[str, int], ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        basis = tuple((str(n), int(d)) for n, d in self.basis)
        object.__setattr__(self, "basis", basis)
        index = {}
        for i, (name, _) in enumerate(basis):
            if name in index:
                raise ValueError(f"duplicate basis name {name!r}")
            index[name] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def of(cls, *pairs, **named) -> "GradedSpace":
        """``GradedSpace.of(("u", 0), ("v", 1))`` or ``GradedSpace.of(u=0, v=1)``."""
        return cls(tuple(pairs) + tuple(named.items()))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.basis)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.basis)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown basis element {name!r}") from None

    def degree(self, name: str) -> int:
        return self.basis[self.index(name)][1]

    def shift(self, k: int) -> "ShiftedSpace":
        return ShiftedSpace(self, k)

    def direct_sum(self, other: "GradedSpace") -> "GradedSpace":
        return GradedSpace(self.basis + other.basis)

    def tensor(self, other: "GradedSpace", sep: str = "|") -> "GradedSpace":
        return GradedSpace(tuple((f"{a}{sep}{b}", da + db) for a, da in self.basis for b, db in other.basis))

    def as_space(self) -> "GradedSpace":
        return self


@dataclass(frozen=True)
class ShiftedSpace:
    """The view ``V[k]``: same basis names, degree of each element lowered by ``k``."""

    base: GradedSpace
    shift_by: int

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def names(self) -> tuple[str, ...]:
        return self.base.names

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d - self.shift_by for d in self.base.degrees)

    @property
    def basis(self) -> tuple[tuple[str, int], ...]:
        return tuple(zip(self.names, self.degrees))

    def index(self, name: str) -> int:
        return self.base.index(name)

    def degree(self, name: str) -> int:
        return self.base.degree(name) - self.shift_by

    def shift(self, k: int) -> "ShiftedSpace":
        return ShiftedSpace(self.base, self.shift_by + k)

    def as_space(self) -> GradedSpace:
        return GradedSpace(self.basis)


def shift(V, k: int) -> ShiftedSpace:
    return V.shift(k)


def superdimension(V) -> int:
    return sum(1 if d % 2 == 0 else -1 for d in V.degrees)


# -- multilinear maps ---------------------------------------------------------


def _normalize_outputs(outputs) -> dict[str, Fraction]:
    if isinstance(outputs, Mapping):
        items = outputs.items()
    else:
        items = outputs
    acc: dict[str, Fraction] = {}
    for name, c in items:
        acc[name] = acc.get(name, ZERO) + to_scalar(c)
    return {k: v for k, v in acc.items() if v}


class GradedMultiMap:
    """Homogeneous multilinear map ``domain^{⊗arity} -> codomain`` of a fixed degree.

    Structure constants are keyed by tuples of input basis names; every stored
    output must satisfy ``deg(out) == sum(deg(inputs)) + degree``.
    """

    __slots__ = ("domain", "arity", "codomain", "degree", "_table")

    def __init__(self, domain, arity: int, codomain, degree: int, coefficients=None):
        if arity < 1:
            raise ValueError("arity must be at least 1")
        self.domain = domain
        self.arity = arity
        self.codomain = codomain
        self.degree = degree
        table: dict[tuple[int, ...], dict[int, Fraction]] = {}
        ddeg = domain.degrees
        cdeg = codomain.degrees
        for key, outputs in (coefficients or {}).items():
            names = (key,) if isinstance(key, str) else tuple(key)
            if len(names) != arity:
                raise ValueError(f"input {names} has length {len(names)}, expected arity {arity}")
            idx = tuple(domain.index(n) for n in names)
            outs = _normalize_outputs(outputs)
            for out_name, c in outs.items():
                j = codomain.index(out_name)
                want = sum(ddeg[i] for i in idx) + degree
                if cdeg[j] != want:
                    parts = " + ".join(f"deg({n})={ddeg[i]}" for n, i in zip(names, idx))
                    raise DegreeError(
                        f"coefficient {names} -> {out_name!r} violates degree {degree}: "
                        f"{parts} + {degree} = {want}, but deg({out_name})={cdeg[j]}"
                    )
                row = table.setdefault(idx, {})
                row[j] = row.get(j, ZERO) + c
                if not row[j]:
                    del row[j]
            if idx in table and not table[idx]:
                del table[idx]
        self._table = table

    @classmethod
    def _from_table(cls, domain, arity, codomain, degree, table) -> "GradedMultiMap":
        m = cls.__new__(cls)
        m.domain = domain
        m.arity = arity
        m.codomain = codomain
        m.degree = degree
        m._table = {k: dict(v) for k, v in table.items() if v}
        return m

    @classmethod
    def zero(cls, domain, arity: int, codomain, degree: int) -> "GradedMultiMap":
        return cls._from_table(domain, arity, codomain, degree, {})

    @classmethod
    def identity(cls, space) -> "GradedMultiMap":
        return cls._from_table(space, 1, space, 0, {(i,): {i: ONE} for i in range(space.dim)})

    @classmethod
    def elementary(cls, domain, inputs: Sequence[str], output: str, codomain=None) -> "GradedMultiMap":
        """The map sending the basis tuple ``inputs`` to ``output`` and everything else to 0."""
        codomain = codomain or domain
        deg = codomain.degree(output) - sum(domain.degree(n) for n in inputs)
        return cls(domain, len(inputs), codomain, deg, {tuple(inputs): {output: 1}})

    @property
    def table(self) -> dict[tuple[int, ...], dict[int, Fraction]]:
        """Index-level structure constants (do not mutate)."""
        return self._table

    @property
    def coefficients(self) -> dict[tuple[str, ...], dict[str, Fraction]]:
        dn, cn = self.domain.names, self.codomain.names
        return {tuple(dn[i] for i in k): {cn[j]: c for j, c in v.items()} for k, v in self._table.items()}

    def __call__(self, *names: str) -> dict[str, Fraction]:
        if len(names) != self.arity:
            raise ValueError(f"expected {self.arity} arguments")
        idx = tuple(self.domain.index(n) for n in names)
        cn = self.codomain.names
        return {cn[j]: c for j, c in self._table.get(idx, {}).items()}

    def is_zero(self) -> bool:
        return not self._table

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMultiMap):
            return NotImplemented
        return (
            self.arity == other.arity
            and self.domain.basis == other.domain.basis
            and self.codomain.basis == other.codomain.basis
            and (self.degree == other.degree or (self.is_zero() and other.is_zero()))
            and self._table == other._table
        )

    def __repr__(self):
        return f"GradedMultiMap(arity={self.arity}, degree={self.degree}, nnz={sum(map(len, self._table.values()))})"

    def _check_compatible(self, other: "GradedMultiMap"):
        if self.arity != other.arity or self.domain.basis != other.domain.basis or self.codomain.basis != other.codomain.basis:
            raise ValueError("incompatible maps")
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise DegreeError(f"cannot add maps of degree {self.degree} and {other.degree}")

    def __add__(self, other: "GradedMultiMap") -> "GradedMultiMap":
        self._check_compatible(other)
        table = {k: dict(v) for k, v in self._table.items()}
        for k, v in other._table.items():
            row = table.setdefault(k, {})
            for j, c in v.items():
                s = row.get(j, ZERO) + c
                if s:
                    row[j] = s
                else:
                    row.pop(j, None)
        degree = self.degree if not self.is_zero() else other.degree
        return GradedMultiMap._from_table(self.domain, self.arity, self.codomain, degree, table)

    def scale(self, c) -> "GradedMultiMap":
        c = to_scalar(c)
        table = {k: {j: c * v for j, v in r.items()} for k, r in self._table.items()} if c else {}
        return GradedMultiMap._from_table(self.domain, self.arity, self.codomain, self.degree, table)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def input_tuples(self):
        return itertools.product(range(self.domain.dim), repeat=self.arity)

    def matrix(self) -> SparseMatrix:
        """Matrix from ``domain^{⊗arity}`` (lexicographic tuple order) to ``codomain``."""
        n = self.domain.dim
        rows: dict[int, dict[int, Fraction]] = {}
        for idx, outs in self._table.items():
            col = 0
            for i in idx:
                col = col * n + i
            for j, c in outs.items():
                rows.setdefault(j, {})[col] = c
        return SparseMatrix(self.codomain.dim, n**self.arity, rows)

    @classmethod
    def from_matrix(cls, M: SparseMatrix, domain, arity: int, codomain, degree: int) -> "GradedMultiMap":
        n = domain.dim
        table: dict[tuple[int, ...], dict[int, Fraction]] = {}
        for j, col, c in M.entries():
            idx = []
            x = col
            for _ in range(arity):
                idx.append(x % n)
                x //= n
            table.setdefault(tuple(reversed(idx)), {})[j] = c
        # go through the checked constructor for degree validation
        dn, cn = domain.names, codomain.names
        return cls(domain, arity, codomain, degree, {tuple(dn[i] for i in k): {cn[j]: c for j, c in v.items()} for k, v in table.items()})

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "degree": self.degree,
            "entries": [
                {"in": list(k), "out": {o: format_scalar(c) for o, c in sorted(v.items())}}
                for k, v in sorted(self.coefficients.items())
            ],
        }
