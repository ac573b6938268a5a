"""Small algebras used throughout the tests and the audit.

Each constructor returns an :class:`AlgebraPresentation`; the same data ships
as JSON next to this module (``<name>.json``) so the CLI can read it.
"""

from __future__ import annotations

from importlib import resources

from ..graded import GradedMultiMap, GradedSpace
from ..structures import AlgebraPresentation


def _pres(pairs, kind, N, name, d=None, m=None, bracket=None):
    V = GradedSpace(tuple(pairs))
    return AlgebraPresentation(
        V,
        kind,
        N,
        diff=None if d is None else GradedMultiMap(V, 1, V, 1, d),
        mult=None if m is None else GradedMultiMap(V, 2, V, 0, m),
        bracket=None if bracket is None else GradedMultiMap(V, 2, V, 0, bracket),
        name=name,
    )


def chain3():
    """u -> v -> w, degrees 0, 1, 2: a proper 3-complex."""
    return _pres([("u", 0), ("v", 1), ("w", 2)], "ncomplex", 3, "chain3", d={"u": {"v": 1}, "v": {"w": 1}})


def point():
    """One-dimensional space with d = 0."""
    return _pres([("x", 0)], "ncomplex", 3, "point", d={})


def three_assoc():
    """a, b, c, d in degree 0 with aa = b, ab = d, ba = c."""
    return _pres(
        [("a", 0), ("b", 0), ("c", 0), ("d", 0)],
        "nassociative",
        3,
        "three_assoc",
        m={("a", "a"): {"b": 1}, ("a", "b"): {"d": 1}, ("b", "a"): {"c": 1}},
    )


def unital1():
    """The ground field: one even basis vector with x.x = x."""
    return _pres([("x", 0)], "ndga", 2, "unital1", d={}, m={("x", "x"): {"x": 1}})


def zero_mult():
    """Two even basis vectors, all products zero."""
    return _pres([("x", 0), ("y", 0)], "ndga", 2, "zero_mult", d={}, m={})


def dual_numbers():
    """k[e]/(e^2) in degree 0."""
    return _pres(
        [("1", 0), ("e", 0)],
        "ndga",
        2,
        "dual_numbers",
        d={},
        m={("1", "1"): {"1": 1}, ("1", "e"): {"e": 1}, ("e", "1"): {"e": 1}},
    )


def upper_triangular():
    """Upper triangular 2x2 matrices, basis e11, e12, e22."""
    return _pres(
        [("e11", 0), ("e12", 0), ("e22", 0)],
        "ndga",
        2,
        "upper_triangular",
        d={},
        m={
            ("e11", "e11"): {"e11": 1},
            ("e11", "e12"): {"e12": 1},
            ("e12", "e22"): {"e12": 1},
            ("e22", "e22"): {"e22": 1},
        },
    )


def unit_dga():
    """Unital dga on 1, u, v (degrees 0, 0, 1) with du = v and all products of u, v zero."""
    unit = {("1", "1"): {"1": 1}}
    for x in ("u", "v"):
        unit[("1", x)] = {x: 1}
        unit[(x, "1")] = {x: 1}
    return _pres([("1", 0), ("u", 0), ("v", 1)], "ndga", 2, "unit_dga", d={"u": {"v": 1}}, m=unit)


def exterior1():
    """Exterior algebra on one odd generator t, d = 0."""
    return _pres([("1", 0), ("t", 1)], "ndga", 2, "exterior1", d={}, m={("1", "1"): {"1": 1}, ("1", "t"): {"t": 1}, ("t", "1"): {"t": 1}})


def unit_chain3():
    """Unital 3-dga: 1 plus the chain u -> v -> w, products of u, v, w zero."""
    unit = {("1", "1"): {"1": 1}}
    for x in ("u", "v", "w"):
        unit[("1", x)] = {x: 1}
        unit[(x, "1")] = {x: 1}
    return _pres(
        [("1", 0), ("u", 0), ("v", 1), ("w", 2)],
        "ndga",
        3,
        "unit_chain3",
        d={"u": {"v": 1}, "v": {"w": 1}},
        m=unit,
    )


def idempotent_null():
    """x.x = x and every product involving y is zero; admits a proper (2, 3)-deformation."""
    return _pres([("x", 0), ("y", 0)], "ndga", 2, "idempotent_null", d={}, m={("x", "x"): {"x": 1}})


ALL = {
    f.__name__: f
    for f in (chain3, point, three_assoc, unital1, zero_mult, dual_numbers, upper_triangular, unit_dga, exterior1, unit_chain3, idempotent_null)
}


def get(name: str) -> AlgebraPresentation:
    try:
        return ALL[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(ALL)}") from None


def json_path(name: str):
    """Path of the shipped JSON copy of a fixture."""
    return resources.files(__name__).joinpath(f"{name}.json")
