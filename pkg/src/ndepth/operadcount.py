"""Dimensions of small operad components, computed from explicit spanning sets.

Free algebra elements on letters ``0..n-1`` (all of degree 0) are nested tuples:
a letter is an ``int``, ``("u", t)`` is ``d(t)`` and ``("b", s, t)`` is the
product (or bracket) of ``s`` and ``t``.  Linear combinations are dicts
``term -> Fraction``.  Working in the multilinear part of a free algebra rather
than in the operad itself means every sign comes from evaluating expressions,
never from orienting trees by hand.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactmath import ONE, ZERO, SparseMatrix, _echelon, rank
from .graded import GradedMultiMap, GradedSpace
from .structures import shift_product
from .trees import PlanarTree, catalan, enumerate_ub, tree_sum

Term = object  # int | tuple


def _add(acc: dict, term, c):
    v = acc.get(term, ZERO) + c
    if v:
        acc[term] = v
    else:
        acc.pop(term, None)


def u_count(t) -> int:
    if isinstance(t, int):
        return 0
    if t[0] == "u":
        return 1 + u_count(t[1])
    return u_count(t[1]) + u_count(t[2])


def letters(t) -> tuple[int, ...]:
    if isinstance(t, int):
        return (t,)
    if t[0] == "u":
        return letters(t[1])
    return letters(t[1]) + letters(t[2])


def d_power(t, k: int):
    for _ in range(k):
        t = ("u", t)
    return t


def show(t) -> str:
    if isinstance(t, int):
        return f"x{t + 1}"
    if t[0] == "u":
        return f"d({show(t[1])})"
    return f"({show(t[1])}{show(t[2])})"


# -- N-dga rewriting ---------------------------------------------------------------


@dataclass(frozen=True)
class NormalFormWord:
    """``x_{σ(1)}^{(k_1)} ... x_{σ(n)}^{(k_n)}`` as a left comb."""

    perm: tuple[int, ...]
    exps: tuple[int, ...]

    @classmethod
    def from_term(cls, t) -> "NormalFormWord":
        factors = []
        while not isinstance(t, int) and t[0] == "b":
            factors.append(t[2])
            t = t[1]
        factors.append(t)
        factors.reverse()
        perm, exps = [], []
        for f in factors:
            k = 0
            while not isinstance(f, int):
                if f[0] != "u":
                    raise ValueError(f"{show(t)} is not a normal form")
                f = f[1]
                k += 1
            perm.append(f)
            exps.append(k)
        return cls(tuple(perm), tuple(exps))

    def to_term(self):
        t = None
        for i, k in zip(self.perm, self.exps):
            f = d_power(i, k)
            t = f if t is None else ("b", t, f)
        return t

    @property
    def degree(self) -> int:
        return sum(self.exps)


class NdgaRewriter:
    """Leibniz (d pushed onto factors), associativity (to left combs) and ``d^N = 0``."""

    def __init__(self, N: int):
        self.N = N
        self._memo: dict = {}

    # one-step rules, each returning a combination or None if not a redex here
    def _rule_at_root(self, t):
        if isinstance(t, int):
            return None
        if t[0] == "u":
            k, s = 0, t
            while not isinstance(s, int) and s[0] == "u":
                s = s[1]
                k += 1
            if k >= self.N:
                return {}
            inner = t[1]
            if not isinstance(inner, int) and inner[0] == "b":
                a, b = inner[1], inner[2]
                sign = -ONE if u_count(a) % 2 else ONE
                out: dict = {}
                _add(out, ("b", ("u", a), b), ONE)
                _add(out, ("b", a, ("u", b)), sign)
                return out
            return None
        a, bc = t[1], t[2]
        if not isinstance(bc, int) and bc[0] == "b":
            return {("b", ("b", a, bc[1]), bc[2]): ONE}
        return None

    def normalize(self, t) -> dict:
        """Innermost normal form (memoized)."""
        if t in self._memo:
            return self._memo[t]
        if isinstance(t, int):
            res = {t: ONE}
        elif t[0] == "u":
            res = {}
            for s, c in self.normalize(t[1]).items():
                step = self._rule_at_root(("u", s))
                if step is None:
                    _add(res, ("u", s), c)
                else:
                    for r, c2 in step.items():
                        for x, c3 in self.normalize(r).items():
                            _add(res, x, c * c2 * c3)
        else:
            res = {}
            left, right = self.normalize(t[1]), self.normalize(t[2])
            for a, ca in left.items():
                for b, cb in right.items():
                    step = self._rule_at_root(("b", a, b))
                    if step is None:
                        _add(res, ("b", a, b), ca * cb)
                    else:
                        for r, c2 in step.items():
                            for x, c3 in self.normalize(r).items():
                                _add(res, x, ca * cb * c2 * c3)
        self._memo[t] = res
        return res

    def _redexes(self, t, path=()):
        if self._rule_at_root(t) is not None:
            yield path
        if not isinstance(t, int):
            for i in range(1, len(t)):
                yield from self._redexes(t[i], path + (i,))

    def _rewrite_at(self, t, path):
        if not path:
            return self._rule_at_root(t)
        i = path[0]
        out = {}
        for s, c in self._rewrite_at(t[i], path[1:]).items():
            _add(out, t[:i] + (s,) + t[i + 1 :], c)
        return out

    def normalize_random(self, t, rng: random.Random, max_steps: int = 100000) -> dict:
        """Normal form reached by rewriting at randomly chosen redexes."""
        combo = {t: ONE}
        for _ in range(max_steps):
            reducible = [(s, c) for s, c in combo.items() if next(self._redexes(s), None) is not None]
            if not reducible:
                return combo
            s, c = rng.choice(sorted(reducible, key=repr))
            paths = list(self._redexes(s))
            path = rng.choice(paths)
            del combo[s]
            for r, c2 in self._rewrite_at(s, path).items():
                _add(combo, r, c * c2)
        raise RuntimeError("rewriting did not terminate")


def binary_shapes(leaves: tuple):
    """All planar binary bracketings of the given leaf sequence."""
    if len(leaves) == 1:
        yield leaves[0]
        return
    for cut in range(1, len(leaves)):
        for a in binary_shapes(leaves[:cut]):
            for b in binary_shapes(leaves[cut:]):
                yield ("b", a, b)


def decorations(t, N: int):
    """Every way of putting ``d^e`` (``e < N``) on each node of ``t``."""
    if isinstance(t, int):
        subs = [t]
    else:
        subs = [("b", a, b) for a in decorations(t[1], N) for b in decorations(t[2], N)]
    for s in subs:
        for e in range(N):
            yield d_power(s, e)


def free_terms(n: int, N: int, perms=None):
    perms = [tuple(range(n))] if perms is None else perms
    for p in perms:
        for shape in binary_shapes(p):
            yield from decorations(shape, N)


def ndga_normal_forms(N: int, n: int, all_labelings: bool = False) -> set[NormalFormWord]:
    """Monomials occurring in normal forms of the spanning set of ``N-dga(n)``.

    By default only the identity labeling of the leaves is expanded; every
    normal form of a relabeled term is the relabeled normal form, so the full
    set is the ``S_n``-orbit.  ``all_labelings=True`` expands all ``n!`` labelings.
    """
    rw = NdgaRewriter(N)
    perms = list(itertools.permutations(range(n))) if all_labelings else None
    seen: set = set()
    for t in free_terms(n, N, perms):
        seen.update(rw.normalize(t))
    return {NormalFormWord.from_term(s) for s in seen}


def _expand_orbit(words: set[NormalFormWord], n: int) -> set[NormalFormWord]:
    out = set()
    for sigma in itertools.permutations(range(n)):
        for w in words:
            out.add(NormalFormWord(tuple(sigma[i] for i in w.perm), w.exps))
    return out


def ndga_dims(N: int, n_max: int, all_labelings_up_to: int = 3) -> dict[int, dict[str, int]]:
    """``n -> {dim, superdim}`` of ``N-dga(n)`` counted from normal forms."""
    out = {}
    for n in range(1, n_max + 1):
        full = n <= all_labelings_up_to
        words = ndga_normal_forms(N, n, all_labelings=full)
        if not full:
            words = _expand_orbit(words, n)
        out[n] = {
            "dim": len(words),
            "superdim": sum(-1 if w.degree % 2 else 1 for w in words),
            "closed_form": math.factorial(n) * N**n,
        }
    return out


def confluence_check(N: int, n: int, trials: int = 3, seed: int = 0) -> tuple[bool, object]:
    """Compare innermost normal forms with randomly ordered rewriting on every free term."""
    rw = NdgaRewriter(N)
    rng = random.Random(seed)
    for t in free_terms(n, N, list(itertools.permutations(range(n)))):
        ref = rw.normalize(t)
        for _ in range(trials):
            if rw.normalize_random(t, rng) != ref:
                return False, t
    return True, None


# -- N-dgla ----------------------------------------------------------------------


def _graded_commutator_words(t, degs) -> dict[tuple[int, ...], Fraction]:
    """Image of a bracket tree over decorated letters in the free associative algebra."""
    if isinstance(t, int):
        return {(t,): ONE}
    A = _graded_commutator_words(t[1], degs)
    B = _graded_commutator_words(t[2], degs)
    da = sum(degs[i] for i in letters(t[1]))
    db = sum(degs[i] for i in letters(t[2]))
    s = -ONE if (da * db) % 2 else ONE
    out: dict = {}
    for a, ca in A.items():
        for b, cb in B.items():
            _add(out, a + b, ca * cb)
            _add(out, b + a, -s * ca * cb)
    return out


def _right_normed(order: tuple[int, ...]):
    t = order[-1]
    for i in reversed(order[:-1]):
        t = ("b", i, t)
    return t


@lru_cache(maxsize=None)
def _lie_rank_sorted(parities: tuple[int, ...], exhaustive: bool) -> int:
    n = len(parities)
    cols = {w: i for i, w in enumerate(itertools.permutations(range(n)))}
    if exhaustive:
        shapes = [s for p in itertools.permutations(range(n)) for s in binary_shapes(p)]
    else:
        # right-normed monomials ending in the last letter already span
        shapes = [_right_normed(p + (n - 1,)) for p in itertools.permutations(range(n - 1))]
    vecs = []
    for shape in shapes:
        img = _graded_commutator_words(shape, parities)
        vecs.append({cols[w]: c for w, c in img.items()})
    M = SparseMatrix(len(vecs), len(cols), dict(enumerate(vecs)))
    return rank(M)


def lie_rank(parities: tuple[int, ...], exhaustive: bool = False) -> int:
    """Rank of the bracket monomials on ``n`` letters of the given parities.

    ``exhaustive`` uses every bracketing of every ordering instead of the
    right-normed spanning set; the two agree and the default is much cheaper.
    """
    return _lie_rank_sorted(tuple(sorted(parities)), exhaustive)


def ndgla_dims(N: int, n_max: int) -> dict[int, dict[str, int]]:
    """``N-dgla(n)``: Leibniz moves every d onto a letter, so the component splits
    by decoration ``(k_1..k_n)``, ``k_i < N``; each summand is the multilinear part of
    the free graded Lie algebra on letters of degree ``k_i``, whose dimension is the
    rank of its commutator image in the free associative algebra."""
    out = {}
    for n in range(1, n_max + 1):
        dim = sdim = 0
        for ks in itertools.product(range(N), repeat=n):
            r = lie_rank(tuple(k % 2 for k in ks))
            dim += r
            sdim += -r if sum(ks) % 2 else r
        out[n] = {"dim": dim, "superdim": sdim, "closed_form": math.factorial(n - 1) * N**n}
    return out


# -- ass^N --------------------------------------------------------------------------


def interval_algebra(n: int) -> tuple[GradedSpace, GradedMultiMap, dict[str, PlanarTree]]:
    """Free magma on the consecutive letters ``x1..xn``, restricted to interval monomials.

    ``m(s, t)`` is the bracketing ``(s t)`` when ``s`` ends right before ``t``
    starts, and 0 otherwise.  All elements have degree 0.
    """
    elems: dict[tuple[int, int], list] = {}
    for length in range(1, n + 1):
        for i in range(n - length + 1):
            j = i + length
            elems[(i, j)] = list(binary_shapes(tuple(range(i, j))))
    names = {}
    basis = []
    for (i, j), terms in sorted(elems.items(), key=lambda kv: (kv[0][1] - kv[0][0], kv[0][0])):
        for t in terms:
            names[t] = show(t)
            basis.append((show(t), 0))
    V = GradedSpace(tuple(basis))
    coeffs = {}
    for (i, j), ts in elems.items():
        for (k, l), us in elems.items():
            if k == j:
                for s in ts:
                    for t in us:
                        coeffs[(names[s], names[t])] = {names[("b", s, t)]: 1}
    shapes = {names[t]: _shape_of(t) for t in elems[(0, n)]}
    return V, GradedMultiMap(V, 2, V, 0, coeffs), shapes


def _shape_of(t) -> PlanarTree:
    def ser(s):
        return "*" if isinstance(s, int) else f"b({ser(s[1])},{ser(s[2])})"

    return PlanarTree.parse(ser(t))


def nassociative_identity(N: int) -> dict[str, Fraction]:
    """Coefficients ``c_T`` of the relation ``Σ_T c_T T(x_1..x_{N+1})``.

    Generated by evaluating the length-one part of ``δ^N`` for the lifted product
    on the free interval algebra; keys are tree serializations.
    """
    n = N + 1
    V, m, shapes = interval_algebra(n)
    op = tree_sum(n, N, {2: shift_product(m)})
    word = tuple(V.index(f"x{i + 1}") for i in range(n))
    out = op.table.get(word, {})
    return {shapes[V.names[j]].serialize(): c for j, c in out.items()}


def assN_dims(N: int, n_max: int | None = None, shuffle_seed: int | None = None) -> dict[int, dict[str, int]]:
    """``ass^N(n)`` for ``n <= N+1``: free counts below ``N+1``, free minus relation rank at ``N+1``.

    ``shuffle_seed`` permutes the free basis before the rank computation.
    """
    n_max = N + 1 if n_max is None else n_max
    if n_max > N + 1:
        raise ValueError("ass^N is only computed up to arity N+1")
    out = {}
    for n in range(1, n_max + 1):
        free = math.factorial(n) * catalan(n - 1)
        if n <= N:
            out[n] = {"dim": free, "free": free, "relation_rank": 0}
            continue
        rel = nassociative_identity(N)
        trees = sorted(PlanarTree.parse(s).serialize() for s in _all_binary(n))
        perms = list(itertools.permutations(range(n)))
        cols = [(t, p) for t in trees for p in perms]
        if shuffle_seed is not None:
            random.Random(shuffle_seed).shuffle(cols)
        col = {c: i for i, c in enumerate(cols)}
        rows = {}
        for r, p in enumerate(perms):
            rows[r] = {col[(t, p)]: c for t, c in rel.items() if c}
        M = SparseMatrix(len(perms), len(cols), rows)
        rk = rank(M)
        out[n] = {"dim": free - rk, "free": free, "relation_rank": rk}
    return out


def _all_binary(n: int) -> list[str]:
    return [T.serialize() for T in enumerate_ub(n, 0, n - 1)]


def assN_printed_formula(N: int) -> Fraction:
    """The closed form as printed: ``(1/N!) binom(2N, N) - (N+1)!``."""
    return Fraction(math.comb(2 * N, N), math.factorial(N)) - math.factorial(N + 1)


def assN_candidate(N: int) -> int:
    return math.factorial(N + 1) * (catalan(N) - 1)


def ndgla_assN_dims(kind: str, N: int, n_max: int) -> dict[int, dict[str, int]]:
    if kind == "ndgla":
        return ndgla_dims(N, n_max)
    if kind == "assN":
        return assN_dims(N, n_max)
    raise ValueError(f"unknown kind {kind!r}; expected 'ndgla' or 'assN'")


# -- depth-N dg associative algebras ----------------------------------------------


class DepthFreeAlgebra:
    """Multilinear free algebra on letters ``0..n-1`` with unary ``d`` and binary ``m``.

    Graded by the number of ``d``'s; letters have degree 0.
    """

    def __init__(self, n: int, max_u: int):
        self.n = n
        self.max_u = max_u
        self._cache: dict = {}

    def terms(self, S: frozenset, u: int) -> list:
        key = (S, u)
        if key in self._cache:
            return self._cache[key]
        out = []
        if u < 0:
            pass
        elif len(S) == 1 and u == 0:
            out = [next(iter(S))]
        else:
            if u > 0:
                out.extend(("u", t) for t in self.terms(S, u - 1))
            items = sorted(S)
            for r in range(1, len(items)):
                for left in itertools.combinations(items, r):
                    L = frozenset(left)
                    R = S - L
                    for ul in range(u + 1):
                        for a in self.terms(L, ul):
                            for b in self.terms(R, u - ul):
                                out.append(("b", a, b))
        self._cache[key] = out
        return out


def _shifted_deg(t) -> int:
    return u_count(t) - 1


def _delta_word(word: tuple, coeff, out: dict):
    """Coderivation lift of ``m1 = d``, ``m2(a, b) = (-1)^{|a|-1} ab`` applied to one word."""
    pre = 0
    for i, t in enumerate(word):
        s = -1 if pre % 2 else 1
        _add(out, word[:i] + (("u", t),) + word[i + 1 :], s * coeff)
        if i + 1 < len(word):
            s2 = s * (-1 if (u_count(t) - 1) % 2 else 1)
            _add(out, word[:i] + (("b", t, word[i + 1]),) + word[i + 2 :], s2 * coeff)
        pre += _shifted_deg(t)


def depth_relation(N: int, args: tuple) -> dict:
    """Length-one output of ``δ^N`` on the word ``args`` (an element of the free algebra)."""
    cur = {tuple(args): ONE}
    for _ in range(N):
        nxt: dict = {}
        for w, c in cur.items():
            _delta_word(w, c, nxt)
        cur = nxt
    out: dict = {}
    for w, c in cur.items():
        if len(w) == 1:
            _add(out, w[0], c)
    return out


def _set_partitions_ordered(items: tuple, k: int):
    """Ordered tuples of ``k`` nonempty disjoint subsets covering ``items``."""
    if k == 1:
        yield (frozenset(items),)
        return
    first = items[0]
    rest = items[1:]
    n = len(items)
    for labels in itertools.product(range(k), repeat=n):
        if len(set(labels)) == k:
            parts = tuple(frozenset(x for x, l in zip(items, labels) if l == j) for j in range(k))
            yield parts


def dgass_dims(N: int, n_max: int, u_max: int) -> dict[int, dict[int, dict[str, int]]]:
    """``n -> u -> {free, ideal_rank, dim}`` for the operad of depth-N dg associative algebras.

    The ideal in arity ``n`` and degree ``u`` is spanned by the relations
    ``R_l(t_1..t_l)`` (all ``l``, all argument tuples with the right letters and
    degree) and everything obtained from lower ideal elements by ``d`` and by
    multiplying with arbitrary elements on either side.
    """
    F = DepthFreeAlgebra(n_max, u_max)
    ideal: dict = {}

    def ideal_span(S: frozenset, u: int) -> list[dict]:
        key = (S, u)
        if key in ideal:
            return ideal[key]
        gens: list[dict] = []
        if u >= 0:
            items = tuple(sorted(S))
            for l in range(1, min(len(S), N + 1) + 1):
                if N - l + 1 < 0:
                    continue
                base_u = u - (N - l + 1)
                if base_u < 0:
                    continue
                for parts in _set_partitions_ordered(items, l):
                    for us in _compositions(base_u, l):
                        for args in itertools.product(*(F.terms(P, k) for P, k in zip(parts, us))):
                            r = depth_relation(N, args)
                            if r:
                                gens.append(r)
            for g in ideal_span(S, u - 1) if u > 0 else []:
                gens.append({("u", t): c for t, c in g.items()})
            for r in range(1, len(items)):
                for left in itertools.combinations(items, r):
                    Lset = frozenset(left)
                    Rset = S - Lset
                    for ul in range(u + 1):
                        for g in ideal_span(Lset, ul):
                            for b in F.terms(Rset, u - ul):
                                gens.append({("b", t, b): c for t, c in g.items()})
                        for g in ideal_span(Rset, u - ul):
                            for a in F.terms(Lset, ul):
                                gens.append({("b", a, t): c for t, c in g.items()})
        basis = _reduce_basis(gens)
        ideal[key] = basis
        return basis

    out: dict = {}
    for n in range(1, n_max + 1):
        S = frozenset(range(n))
        out[n] = {}
        for u in range(u_max + 1):
            free = len(F.terms(S, u))
            rk = len(ideal_span(S, u))
            out[n][u] = {"free": free, "ideal_rank": rk, "dim": free - rk}
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for a in range(total + 1):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


def _reduce_basis(vectors: list[dict]) -> list[dict]:
    """Row-reduced basis of the span of sparse vectors keyed by terms."""
    if not vectors:
        return []
    keys = sorted({k for v in vectors for k in v}, key=repr)
    idx = {k: i for i, k in enumerate(keys)}
    M = SparseMatrix(len(vectors), len(keys), {r: {idx[k]: c for k, c in v.items()} for r, v in enumerate(vectors) if v})
    return [{keys[c]: v for c, v in row.items()} for _, row in _echelon(M, True)]


# -- series ---------------------------------------------------------------------------


@dataclass
class SeriesPrefix:
    coefficients: list[Fraction]
    order: int


SERIES_KINDS = ("ndga", "ndga-super", "ndgla", "ndgla-super")


def closed_form_series(kind: str, N: int, order: int) -> SeriesPrefix:
    """Coefficients of ``x^1..x^order`` of the closed-form generating series (via sympy)."""
    import sympy

    x = sympy.symbols("x")
    if kind == "ndga":
        f = N * x / (1 - N * x)
    elif kind == "ndgla":
        f = sympy.log(1 / (1 - N * x))
    elif kind == "ndga-super":
        f = x if N % 2 == 0 else x / (1 - x)
    elif kind == "ndgla-super":
        f = sympy.Integer(0) if N % 2 == 0 else sympy.log(1 / (1 - x))
    else:
        raise ValueError(f"unknown series kind {kind!r}; expected one of {SERIES_KINDS}")
    poly = sympy.series(f, x, 0, order + 1).removeO()
    coeffs = [Fraction(str(sympy.Rational(poly.coeff(x, k)))) for k in range(1, order + 1)]
    return SeriesPrefix(coeffs, order)


@dataclass
class SeriesReport:
    kind: str
    N: int
    order: int
    computed: list[Fraction]
    expected: list[Fraction]

    @property
    def passed(self) -> bool:
        return self.computed == self.expected

    @property
    def mismatches(self) -> list[int]:
        return [i + 1 for i, (a, b) in enumerate(zip(self.computed, self.expected)) if a != b]

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "report": "series",
            "kind": self.kind,
            "N": self.N,
            "order": self.order,
            "passed": self.passed,
            "rows": [
                {"n": i + 1, "computed": str(a), "closed_form": str(b), "match": a == b}
                for i, (a, b) in enumerate(zip(self.computed, self.expected))
            ],
        }


def series_check(kind: str, N: int, order: int) -> SeriesReport:
    """Compare computed ``dim/n!`` (or ``superdim/n!``) with the closed-form series."""
    if order > 6:
        raise ValueError("order must be <= 6")
    expected = closed_form_series(kind, N, order).coefficients
    if kind.startswith("ndga"):
        dims = ndga_dims(N, order, all_labelings_up_to=3) if order <= 4 else _ndga_dims_fast(N, order)
    else:
        dims = ndgla_dims(N, order)
    key = "superdim" if kind.endswith("super") else "dim"
    computed = [Fraction(dims[n][key], math.factorial(n)) for n in range(1, order + 1)]
    return SeriesReport(kind, N, order, computed, expected)


def _ndga_dims_fast(N: int, n_max: int) -> dict[int, dict[str, int]]:
    """Normal-form counts for larger ``n``: normalize only products of decorated
    letters in every bracketing (``d`` on internal nodes is redistributed by
    Leibniz onto exactly such terms), identity labeling, then the ``S_n`` orbit."""
    rw = NdgaRewriter(N)
    out = {}
    for n in range(1, n_max + 1):
        seen = set()
        for ks in itertools.product(range(N), repeat=n):
            leaves = tuple(d_power(i, k) for i, k in zip(range(n), ks))
            for shape in binary_shapes(leaves):
                seen.update(rw.normalize(shape))
        words = _expand_orbit({NormalFormWord.from_term(s) for s in seen}, n)
        out[n] = {
            "dim": len(words),
            "superdim": sum(-1 if w.degree % 2 else 1 for w in words),
            "closed_form": math.factorial(n) * N**n,
        }
    return out


# -- N-dga by ideal linear algebra --------------------------------------------------


def _d_word(word: tuple, coeff, out: dict, N: int):
    """Graded derivation on words of decorated letters ``(letter, e)``; drops ``e >= N``."""
    pre = 0
    for i, (x, e) in enumerate(word):
        if e + 1 < N:
            _add(out, word[:i] + ((x, e + 1),) + word[i + 1 :], -coeff if pre % 2 else coeff)
        pre += e


def ndga_quotient_dims(N: int, n: int) -> dict[int, int]:
    """``D -> dim`` of the degree-``D`` part of ``N-dga(n)``, computed as a quotient.

    Leibniz and associativity identify the free object with the tensor algebra
    on decorated letters ``d^e x_i``; the ideal generated by ``d^N`` is spanned
    by the words ``a · d^N(w) · b``.  Words with some ``e >= N`` lie in the ideal
    and are dropped, so the computation runs in the span of words with ``e < N``.
    """
    by_deg: dict[int, list[dict]] = {}
    basis_count: dict[int, int] = {}
    for p in itertools.permutations(range(n)):
        for es in itertools.product(range(N), repeat=n):
            D = sum(es)
            basis_count[D] = basis_count.get(D, 0) + 1
    for p in itertools.permutations(range(n)):
        for i in range(n):
            for j in range(i + 1, n + 1):
                for es in itertools.product(range(N), repeat=n):
                    word = tuple(zip(p, es))
                    a, w, b = word[:i], word[i:j], word[j:]
                    cur = {w: ONE}
                    for _ in range(N):
                        nxt: dict = {}
                        for x, c in cur.items():
                            _d_word(x, c, nxt, N)
                        cur = nxt
                    if cur:
                        g = {a + x + b: c for x, c in cur.items()}
                        by_deg.setdefault(sum(es) + N, []).append(g)
    out = {}
    for D in sorted(basis_count):
        rk = len(_reduce_basis(by_deg.get(D, [])))
        out[D] = basis_count[D] - rk
    return out


def ndga_true_dims(N: int, n_max: int) -> dict[int, dict[str, int]]:
    out = {}
    for n in range(1, n_max + 1):
        per = ndga_quotient_dims(N, n)
        out[n] = {
            "dim": sum(per.values()),
            "superdim": sum(-v if D % 2 else v for D, v in per.items()),
            "closed_form": math.factorial(n) * N**n,
            "by_degree": per,
        }
    return out
