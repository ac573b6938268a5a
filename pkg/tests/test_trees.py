from hypothesis import given, settings
from hypothesis import strategies as st

from ndepth.trees import PlanarTree, catalan, enumerate_arity, enumerate_ub, extension_weight


def test_binary_counts_are_catalan():
    assert [len(enumerate_ub(n, 0, n - 1)) for n in range(1, 9)] == [1, 1, 2, 5, 14, 42, 132, 429]
    assert [catalan(n - 1) for n in range(1, 9)] == [1, 1, 2, 5, 14, 42, 132, 429]


def test_unary_binary_counts():
    assert len(enumerate_ub(2, 2, 1)) == 6
    assert len(enumerate_arity(2, 2)) == 3
    assert enumerate_ub(3, 0, 1) == []


def test_serialization_round_trip():
    for T in enumerate_arity(3, 3):
        assert PlanarTree.parse(T.serialize()) == T
    assert [T.serialize() for T in enumerate_ub(2, 1, 1)] == sorted(T.serialize() for T in enumerate_ub(2, 1, 1))


@given(st.integers(1, 4), st.integers(0, 3))
@settings(max_examples=25, deadline=None)
def test_profiles(l, n):
    for T in enumerate_arity(l, n):
        assert T.leaves == l
        assert T.n_internal == n
        assert sum(k * c for k, c in T.arity_profile().items()) == l + n - 1


def test_extension_weight_linear_chain():
    # a chain has exactly one bottom-up order
    T = PlanarTree.parse("u(u(*))")
    assert extension_weight(T) == 1


def test_extension_weight_two_independent_odd_vertices_cancel():
    # two independent odd vertices: both orders, opposite signs
    T = PlanarTree.parse("b(u(*),u(*))")
    assert extension_weight(T) == 0
    assert extension_weight(T, lambda k: 0) == 2
