import math

import numpy as np
import pytest


def make_mobius(a, b, c, d):
    return lambda t: (a * t + b) / (c * t + d)


def random_mobius(rng, values, min_det=0.1, pole_gap=0.2, tries=500):
    """Unit-determinant map with coefficients in [-2, 2] whose pole stays
    ``pole_gap`` away from every value in ``values``."""
    for _ in range(tries):
        a, b, c, d = rng.uniform(-2.0, 2.0, 4)
        det = a * d - b * c
        if abs(det) < min_det:
            continue
        s = 1.0 / math.sqrt(abs(det))
        a, b, c, d = a * s, b * s, c * s, d * s
        if all(abs(c * v + d) > pole_gap for v in values):
            return (a, b, c, d)
    raise RuntimeError("could not draw a well-conditioned map")


def rel_diff(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
