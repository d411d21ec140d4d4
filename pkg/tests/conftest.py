import numpy as np
import pytest

from eedpaint import EedParams, iterate
from eedpaint.synthetic import random_known_mask, two_region_image


@pytest.fixture(scope="session")
def standard_problem():
    """64x64 piecewise-constant disk image with a 10% random known mask."""
    f = two_region_image((64, 64))
    known = random_known_mask((64, 64), 0.10, seed=0)
    return f, known


@pytest.fixture(scope="session")
def standard_run(standard_problem):
    """Converged fixed-point run on the standard problem (sigma=0.8, lam=1)."""
    f, known = standard_problem
    u, report = iterate(f, known, params=EedParams(sigma=0.8, lam=1.0))
    assert report.status == "converged"
    return f, known, u, report


def random_problem(rng, shape=(32, 32), density_range=(0.1, 0.5)):
    """Random (w, f, mask) triple used by solver and acceptance tests."""
    h, w_ = shape
    f = rng.random(shape)
    density = rng.uniform(*density_range)
    known = np.zeros(h * w_, dtype=bool)
    n_known = max(1, int(round(density * h * w_)))
    known[rng.choice(h * w_, size=min(n_known, h * w_ - 1), replace=False)] = True
    known = known.reshape(shape)
    w = rng.standard_normal(shape)
    return w, f, known
