"""Input validation helpers shared by the numerical core and the estimator API."""

import numpy as np


def as_image(values, name="image"):
    """Coerce to a float64 grey-value grid and check basic invariants.

    Requires a 2-D array of finite values with both sides at least 2 pixels.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array, got shape {arr.shape}")
    if arr.shape[0] < 2 or arr.shape[1] < 2:
        raise ValueError(f"{name} must be at least 2x2 pixels, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf values")
    return arr


def as_data_image(values, name="data image", tol=1e-12):
    """Like :func:`as_image` but additionally requires grey values in [0, 1]."""
    arr = as_image(values, name=name)
    if arr.min() < -tol or arr.max() > 1.0 + tol:
        raise ValueError(
            f"{name} grey values must lie in [0, 1], "
            f"got range [{arr.min():.6g}, {arr.max():.6g}]"
        )
    return arr


def as_mask(known, shape=None, name="mask"):
    """Coerce to a boolean known-pixel mask (True = value is given).

    The mask must contain at least one known and at least one unknown pixel,
    and match ``shape`` when provided.
    """
    arr = np.asarray(known)
    if arr.dtype != np.bool_:
        raise ValueError(f"{name} must be boolean, got dtype {arr.dtype}")
    if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] < 2:
        raise ValueError(f"{name} must be a 2-D array of at least 2x2, got {arr.shape}")
    if shape is not None and arr.shape != tuple(shape):
        raise ValueError(f"{name} shape {arr.shape} does not match image shape {tuple(shape)}")
    if not arr.any():
        raise ValueError(f"{name} has no known pixels")
    if arr.all():
        raise ValueError(f"{name} has no unknown pixels (nothing to inpaint)")
    return arr


def check_domain(domain, shape, name="domain"):
    """Validate a non-empty boolean region selector."""
    arr = np.asarray(domain)
    if arr.dtype != np.bool_ or arr.shape != tuple(shape):
        raise ValueError(f"{name} must be a boolean array of shape {tuple(shape)}")
    if not arr.any():
        raise ValueError(f"{name} is empty")
    return arr
