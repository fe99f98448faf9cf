"""Shared fixtures: the three worked plane/space maps used throughout."""

import pytest

from jonq import dejonq
from jonq.polycore import parse_polynomial


def make_map(n, f_text, g_text, modulus=None):
    ring = dejonq.source_ring(n, modulus)
    return dejonq.construct(parse_polynomial(f_text, ring),
                            parse_polynomial(g_text, ring), n)


@pytest.fixture(scope="session")
def e1():
    """n=2, d=2: f = x3, g = x1^2 - x2*x3."""
    return make_map(2, "x3", "x1^2 - x2*x3")


@pytest.fixture(scope="session")
def e2():
    """n=3, d=2: f = x4, g = x1*x2 - x3*x4."""
    return make_map(3, "x4", "x1*x2 - x3*x4")


@pytest.fixture(scope="session")
def e3():
    """n=2, d=3: f = x1*x3 + x2^2, g = x1^2*x3 + x2^3."""
    return make_map(2, "x1*x3 + x2^2", "x1^2*x3 + x2^3")
