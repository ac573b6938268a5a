"""Shared helpers for the test modules."""

from ndepth import fixtures
from ndepth.structures import end_dga, random_ncomplex


def random_end_algebra(rng, N=2, dim=3):
    """End(C) of a random N-complex: an honest associative algebra with a random differential."""
    return end_dga(random_ncomplex(rng, N, dim), N)


def dga_fixtures():
    return [n for n in fixtures.ALL if fixtures.get(n).kind == "ndga"]
