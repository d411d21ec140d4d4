"""Discrete grid calculus on unit-spacing pixel grids.

Images are 2-D float arrays indexed ``[row, col]`` (y first). Vector fields
are ``(H, W, 2)`` arrays with component 0 along x (columns) and component 1
along y (rows). The gradient uses forward differences with replication at the
last row/column, which encodes the natural no-flux boundary condition; the
divergence is its exact negative adjoint so that assembled operators are
symmetric.
"""

import numpy as np

from .validation import as_image, check_domain


def gradient(u):
    """Forward-difference gradient of an image.

    ``g[j, i, 0] = u[j, i+1] - u[j, i]`` (zero on the last column) and
    ``g[j, i, 1] = u[j+1, i] - u[j, i]`` (zero on the last row).
    """
    u = as_image(u)
    g = np.zeros(u.shape + (2,), dtype=np.float64)
    g[:, :-1, 0] = u[:, 1:] - u[:, :-1]
    g[:-1, :, 1] = u[1:, :] - u[:-1, :]
    return g


def divergence(field):
    """Negative adjoint of :func:`gradient` under the plain pixel inner product.

    Satisfies ``<gradient(u), F> = -<u, divergence(F)>`` exactly (up to
    rounding) for all u, F, which is discrete integration by parts.
    """
    field = np.asarray(field, dtype=np.float64)
    if field.ndim != 3 or field.shape[2] != 2:
        raise ValueError(f"vector field must have shape (H, W, 2), got {field.shape}")
    fx = field[..., 0]
    fy = field[..., 1]
    div = np.zeros(field.shape[:2], dtype=np.float64)
    div[:, :-1] += fx[:, :-1]
    div[:, 1:] -= fx[:, :-1]
    div[:-1, :] += fy[:-1, :]
    div[1:, :] -= fy[:-1, :]
    return div


def gradient_magnitude(u):
    """Pointwise Euclidean norm of the forward-difference gradient."""
    g = gradient(u)
    return np.hypot(g[..., 0], g[..., 1])


def norm_l1(u, domain):
    """Sum of |u| over the pixels selected by ``domain`` (unit pixel area)."""
    u = as_image(u)
    domain = check_domain(domain, u.shape)
    return float(np.abs(u[domain]).sum())


def seminorm_w11(u, domain):
    """Sum over ``domain`` of the Euclidean gradient magnitude |grad u|."""
    u = as_image(u)
    domain = check_domain(domain, u.shape)
    return float(gradient_magnitude(u)[domain].sum())


def norm_w11(u, domain):
    """Full first-order Sobolev-type norm: ``norm_l1 + seminorm_w11``."""
    return norm_l1(u, domain) + seminorm_w11(u, domain)
