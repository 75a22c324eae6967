import math

import numpy as np
import pytest

from roundmoments import make_exponential, make_normal, make_semicircle, make_uniform


def enumerate_float_system(m, k_min, k_max, subnormals=True):
    """Brute-force point list of a small float system (test oracle only)."""
    pts = {0.0}
    if subnormals:
        step = math.ldexp(1.0, k_min - m)
        pts.update(j * step for j in range(1, 2 ** m))
    for i in range(k_min, k_max):
        base = math.ldexp(1.0, i)
        step = math.ldexp(1.0, i - m)
        pts.update(base + j * step for j in range(2 ** m))
    pts.add(math.ldexp(1.0, k_max))
    pos = sorted(pts)
    return np.array([-p for p in reversed(pos) if p != 0.0] + pos)


def brute_floor(points, x):
    below = points[points <= x]
    return below[-1] if below.size else None


def brute_ceil(points, x):
    above = points[points >= x]
    return above[0] if above.size else None


@pytest.fixture(scope="session")
def semicircle():
    return make_semicircle(1.0, 0.0)


@pytest.fixture(scope="session")
def shifted_semicircle():
    return make_semicircle(1.0, 0.3)


@pytest.fixture(scope="session")
def std_normal():
    return make_normal(0.0, 1.0)


@pytest.fixture(scope="session")
def unit_exponential():
    return make_exponential(1.0)


@pytest.fixture(scope="session")
def unit_uniform():
    return make_uniform(0.0, 1.0)


@pytest.fixture(scope="session")
def all_models(semicircle, std_normal, unit_exponential, unit_uniform):
    return [semicircle, std_normal, unit_exponential, unit_uniform]
