"""Planar rooted trees: enumeration, serialization and compilation to operators.

A tree is stored from its top internal vertex down; the root vertex itself is
implicit (it always has exactly one child).  The tree with only the root and
one leaf is :data:`LEAF`, whose operator is the identity.

Serialization: a leaf is ``*``, a unary vertex ``u(...)``, a binary vertex
``b(...,...)`` and a vertex of arity ``k >= 3`` is ``m{k}(...)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from .exactmath import ONE, ZERO
from .graded import GradedMultiMap


@dataclass(frozen=True)
class Node:
    children: tuple["Node", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def arity(self) -> int:
        return len(self.children)

    def serialize(self) -> str:
        if not self.children:
            return "*"
        k = len(self.children)
        tag = "u" if k == 1 else "b" if k == 2 else f"m{k}"
        return f"{tag}({','.join(c.serialize() for c in self.children)})"

    def __str__(self):
        return self.serialize()


LEAF_NODE = Node()


@dataclass(frozen=True)
class PlanarTree:
    """Planar rooted tree, held by the unique child of its root."""

    top: Node

    @classmethod
    def parse(cls, text: str) -> "PlanarTree":
        return cls(_parse(text))

    def serialize(self) -> str:
        return self.top.serialize()

    __str__ = serialize

    def __lt__(self, other: "PlanarTree") -> bool:
        return self.serialize() < other.serialize()

    @cached_property
    def internal(self) -> list[Node]:
        """Internal vertices in preorder."""
        return [v for v, _ in self._skeleton]

    @cached_property
    def _skeleton(self) -> list[tuple[Node, list[int]]]:
        # preorder internal vertices with the preorder ids of their internal children;
        # identification is positional since equal subtrees may share one Node object
        out: list[tuple[Node, list[int]]] = []

        def walk(n):
            vid = len(out)
            out.append((n, []))
            for c in n.children:
                if c.children:
                    out[vid][1].append(walk(c))
            return vid

        if self.top.children:
            walk(self.top)
        return out

    @property
    def leaves(self) -> int:
        def count(n):
            return 1 if not n.children else sum(count(c) for c in n.children)

        return count(self.top)

    @property
    def n_internal(self) -> int:
        return len(self.internal)

    def arity_profile(self) -> dict[int, int]:
        prof: dict[int, int] = {}
        for v in self.internal:
            prof[v.arity] = prof.get(v.arity, 0) + 1
        return prof

    @property
    def unary(self) -> int:
        return self.arity_profile().get(1, 0)

    @property
    def binary(self) -> int:
        return self.arity_profile().get(2, 0)

    @property
    def degree(self) -> int:
        """``sum_k v_k (2 - k)`` over internal vertices of arity ``k``."""
        return sum(cnt * (2 - k) for k, cnt in self.arity_profile().items())

    def vertices(self) -> list[tuple[int, int | None, list[int]]]:
        """``(id, parent, children)`` triples; id 0 is the root, leaves included."""
        table: list[tuple[int, int | None, list[int]]] = [(0, None, [])]

        def walk(n, parent):
            vid = len(table)
            table.append((vid, parent, []))
            table[parent][2].append(vid)
            for c in n.children:
                walk(c, vid)

        walk(self.top, 0)
        return table


LEAF = PlanarTree(LEAF_NODE)


_TOKEN = re.compile(r"\s*(\*|u\(|b\(|m\d+\(|,|\))")


def _parse(text: str) -> Node:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad tree syntax at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    it = iter(tokens)

    def node(tok):
        if tok == "*":
            return LEAF_NODE
        if tok == "u(":
            want = 1
        elif tok == "b(":
            want = 2
        elif tok.startswith("m"):
            want = int(tok[1:-1])
        else:
            raise ValueError(f"unexpected token {tok!r}")
        kids = [node(next(it))]
        while True:
            t = next(it)
            if t == ")":
                break
            if t != ",":
                raise ValueError(f"expected ',' or ')', got {t!r}")
            kids.append(node(next(it)))
        if len(kids) != want:
            raise ValueError(f"vertex {tok!r} has {len(kids)} children")
        return Node(tuple(kids))

    try:
        n = node(next(it))
    except StopIteration:
        raise ValueError(f"truncated tree {text!r}") from None
    if next(it, None) is not None:
        raise ValueError(f"trailing input in {text!r}")
    return n


# -- enumeration ----------------------------------------------------------------


def _splits(total: int, parts: int, minimum: int):
    """Ordered tuples of ``parts`` integers >= minimum summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _splits(total - first, parts - 1, minimum):
            yield (first,) + rest


def enumerate_ub(l: int, u: int, b: int) -> list[PlanarTree]:
    """Trees with ``l`` leaves, ``u`` unary and ``b`` binary internal vertices."""
    if l < 1:
        raise ValueError("a tree has at least one leaf")
    if l != b + 1 or u < 0 or b < 0:
        return []
    memo: dict[tuple[int, int, int], list[Node]] = {}

    def gen(l, u, b):
        key = (l, u, b)
        if key in memo:
            return memo[key]
        out: list[Node] = []
        if l == 1 and u == 0 and b == 0:
            out.append(LEAF_NODE)
        if u > 0:
            out.extend(Node((s,)) for s in gen(l, u - 1, b))
        if b > 0:
            for l1 in range(1, l):
                b1 = l1 - 1
                b2 = b - 1 - b1
                if b2 != l - l1 - 1:
                    continue
                for u1 in range(u + 1):
                    for left in gen(l1, u1, b1):
                        for right in gen(l - l1, u - u1, b2):
                            out.append(Node((left, right)))
        memo[key] = out
        return out

    return sorted(PlanarTree(n) for n in gen(l, u, b))


def enumerate_arity(l: int, n: int, arities: set[int] | None = None) -> list[PlanarTree]:
    """Trees with ``l`` leaves and ``n`` internal vertices of arity >= 1.

    ``arities`` optionally restricts the allowed internal arities.
    """
    if l < 1:
        raise ValueError("a tree has at least one leaf")
    if n < 0:
        return []
    memo: dict[tuple[int, int], list[Node]] = {}

    def gen(l, n):
        key = (l, n)
        if key in memo:
            return memo[key]
        out: list[Node] = []
        if l == 1 and n == 0:
            out.append(LEAF_NODE)
        if n > 0:
            for k in range(1, l + 1):
                if arities is not None and k not in arities:
                    continue
                for ls in _splits(l, k, 1):
                    for ns in _splits(n - 1, k, 0):
                        for kids in itertools.product(*(gen(a, c) for a, c in zip(ls, ns))):
                            out.append(Node(tuple(kids)))
        memo[key] = out
        return out

    return sorted(PlanarTree(t) for t in gen(l, n))


def catalan(n: int) -> int:
    from math import comb

    return comb(2 * n, n) // (n + 1)


# -- operators --------------------------------------------------------------------


class MissingOperator(KeyError):
    pass


def _tensor_apply(children, space_degrees):
    """Koszul-signed tensor product of child operators as an index table.

    Each child is ``(degree, table)``; the result maps concatenated input tuples
    to output tuples: ``{inputs: {outputs: coeff}}``.
    """
    acc: dict[tuple[int, ...], dict[tuple[int, ...], Fraction]] = {(): {(): ONE}}
    acc_deg: dict[tuple[int, ...], int] = {(): 0}
    for fdeg, table in children:
        new: dict[tuple[int, ...], dict[tuple[int, ...], Fraction]] = {}
        new_deg: dict[tuple[int, ...], int] = {}
        for ins, outs in acc.items():
            prefix_deg = acc_deg[ins]
            s = -1 if (fdeg % 2 and prefix_deg % 2) else 1
            for cin, couts in table.items():
                key = ins + cin
                d = new.setdefault(key, {})
                new_deg[key] = prefix_deg + sum(space_degrees[i] for i in cin)
                for o1, c1 in outs.items():
                    for j, c2 in couts.items():
                        k2 = o1 + (j,)
                        d[k2] = d.get(k2, ZERO) + s * c1 * c2
        acc, acc_deg = new, new_deg
    return acc


def _compile_node(node: Node, ops, degrees) -> tuple[int, dict]:
    if node.is_leaf:
        return 0, {(i,): {i: ONE} for i in range(len(degrees))}
    k = node.arity
    if k not in ops:
        raise MissingOperator(f"no operator of arity {k}")
    op = ops[k]
    kids = [_compile_node(c, ops, degrees) for c in node.children]
    tens = _tensor_apply(kids, degrees)
    optab = op.table
    out: dict[tuple[int, ...], dict[int, Fraction]] = {}
    for ins, outs in tens.items():
        row: dict[int, Fraction] = {}
        for ys, c in outs.items():
            if not c:
                continue
            for j, v in optab.get(ys, {}).items():
                row[j] = row.get(j, ZERO) + c * v
        row = {j: v for j, v in row.items() if v}
        if row:
            out[ins] = row
    return op.degree + sum(d for d, _ in kids), out


def compile_operator(tree: PlanarTree, ops: Mapping[int, GradedMultiMap], L: int | None = None) -> GradedMultiMap:
    """Operator ``A[1]^{⊗l} -> A[1]`` obtained by putting ``ops[k]`` on each arity-``k`` vertex.

    Compiles by the grafting recursion: the top vertex composed with the
    Koszul-signed tensor product of its subtrees' operators.
    """
    l = tree.leaves
    if L is not None and l > L:
        raise ValueError(f"tree has {l} leaves, beyond truncation {L}")
    if not ops:
        raise MissingOperator("no operators given")
    space = next(iter(ops.values())).domain
    degree, table = _compile_node(tree.top, ops, space.degrees)
    return GradedMultiMap._from_table(space, l, space, degree, table)


def canonical_order(tree: PlanarTree) -> list[int]:
    """Application order of internal vertices (ids = preorder positions) in the compiled operator.

    ``f1 ⊗ ... ⊗ fk = (f1 ⊗ 1..)(..)(.. ⊗ fk)``, so the rightmost subtree acts first.
    """
    skel = tree._skeleton

    def order(v):
        seq = []
        for c in reversed(skel[v][1]):
            seq.extend(order(c))
        seq.append(v)
        return seq

    return order(0) if skel else []


def extension_weight(tree: PlanarTree, vertex_degree=lambda arity: 1) -> int:
    """Signed number of bottom-up application orders of the tree's vertices.

    This is the multiplicity with which the compiled operator occurs in the
    length-one output of a power of the coderivation: each order contributes
    the Koszul sign of permuting it into :func:`canonical_order`.  With odd
    vertices, a vertex carrying two non-leaf subtrees of odd size makes the
    weight vanish.
    """
    skel = tree._skeleton
    n = len(skel)
    below = [kids for _, kids in skel]
    degs = [vertex_degree(v.arity) for v, _ in skel]
    pos = {v: i for i, v in enumerate(canonical_order(tree))}

    total = 0
    done = [False] * n
    seq: list[int] = []

    def rec():
        nonlocal total
        if len(seq) == n:
            par = 0
            for a in range(n):
                for b in range(a + 1, n):
                    if pos[seq[a]] > pos[seq[b]]:
                        par ^= (degs[seq[a]] * degs[seq[b]]) & 1
            total += -1 if par else 1
            return
        for v in range(n):
            if not done[v] and all(done[c] for c in below[v]):
                done[v] = True
                seq.append(v)
                rec()
                seq.pop()
                done[v] = False

    rec()
    return total


def tree_sum(l: int, N: int, ops: Mapping[int, GradedMultiMap], weighted: bool = True) -> GradedMultiMap:
    """``sum_T w(T) O_T`` over trees with ``l`` leaves and ``N`` internal vertices.

    Only arities present in ``ops`` are used (other vertices carry the zero map).
    ``weighted=False`` gives the plain sum with every tree counted once.
    """
    space = next(iter(ops.values())).domain
    acc = None
    for T in enumerate_arity(l, N, set(ops)):
        w = extension_weight(T, lambda k: ops[k].degree) if weighted else 1
        if not w:
            continue
        O = compile_operator(T, ops).scale(w)
        if acc is None:
            acc = O
        else:
            acc = acc + O
    if acc is None:
        deg = N  # all structure maps have degree 1 on A[1]
        return GradedMultiMap.zero(space, l, space, deg)
    return acc
