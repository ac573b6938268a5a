import pytest

from ndepth.graded import DegreeError, GradedMultiMap, GradedSpace, koszul_sign, superdimension


def test_shift_lowers_degree():
    V = GradedSpace((("a", 0), ("b", 2)))
    assert V.shift(1).degrees == (-1, 1)
    assert superdimension(V.shift(1)) == -2


def test_duplicate_names_rejected():
    with pytest.raises(ValueError, match="a"):
        GradedSpace((("a", 0), ("a", 1)))


def test_degree_violation_message_cites_computation():
    V = GradedSpace((("a", 0), ("b", 1)))
    with pytest.raises(DegreeError, match=r"deg\(a\)=0"):
        GradedMultiMap(V, 2, V, 0, {("a", "a"): {"b": 1}})


def test_koszul_sign():
    assert koszul_sign([1, 1], 1) == 1
    assert koszul_sign([1], 1) == -1
    assert koszul_sign([2, 4], 1) == 1


def test_elementary_degree_and_json():
    V = GradedSpace((("a", 0), ("b", 1)))
    e = GradedMultiMap.elementary(V, ("a", "a"), "b")
    assert e.degree == 1
    assert e.to_json()["entries"] == [{"in": ["a", "a"], "out": {"b": "1"}}]
    assert (e - e).is_zero()
    assert e("a", "a") == {"b": 1}


def test_matrix_round_trip():
    V = GradedSpace((("a", 0), ("b", 0)))
    m = GradedMultiMap(V, 2, V, 0, {("a", "b"): {"a": "1/2", "b": -1}})
    assert GradedMultiMap.from_matrix(m.matrix(), V, 2, V, 0) == m
