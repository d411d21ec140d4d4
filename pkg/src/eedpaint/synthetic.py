"""Synthetic test problems used by the test suite and the walkthrough."""

import numpy as np

from .validation import as_mask


def two_region_image(shape=(64, 64), low=0.25, high=0.75, radius_fraction=0.32):
    """Piecewise-constant image: a disk of value ``high`` on a ``low`` background.

    The disk boundary exercises edges of every orientation, which is the case
    anisotropic inpainting is built for.
    """
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    r = radius_fraction * min(h, w)
    img = np.full(shape, low, dtype=np.float64)
    img[(yy - cy) ** 2 + (xx - cx) ** 2 <= r**2] = high
    return img


def random_known_mask(shape, density, seed=0):
    """Uniformly random known mask with round(density * size) known pixels."""
    if not 0.0 < density < 1.0:
        raise ValueError(f"density must lie in (0, 1), got {density}")
    size = int(np.prod(shape))
    n_known = int(round(density * size))
    n_known = min(max(n_known, 1), size - 1)
    rng = np.random.default_rng(seed)
    flat = np.zeros(size, dtype=bool)
    flat[rng.choice(size, size=n_known, replace=False)] = True
    return as_mask(flat.reshape(shape))


def border_ring_mask(shape):
    """Known pixels on the image border, unknown interior."""
    known = np.zeros(shape, dtype=bool)
    known[0, :] = known[-1, :] = True
    known[:, 0] = known[:, -1] = True
    return known


def ramp_image(shape=(16, 16)):
    """Linear ramp x / (W - 1), constant along rows."""
    h, w = shape
    return np.tile(np.arange(w, dtype=np.float64) / (w - 1), (h, 1))
