"""Edge-enhancing diffusion tensor built from a (smoothed) gradient field.

Per pixel with gradient v the tensor has eigenvector v (across the edge) with
eigenvalue given by the Charbonnier diffusivity, and eigenvector v-perp (along
the edge) with eigenvalue 1. At v = 0 the tensor is the identity, the unique
rotation-invariant continuous limit. Tensor fields are stored as (H, W, 3)
arrays holding (a, b, c) with D = [[a, b], [b, c]].
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EedParams:
    """Model parameters: contrast scale ``lam`` and pre-smoothing scale ``sigma``."""

    sigma: float = 0.8
    lam: float = 1.0

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ValueError(f"lam must be positive and finite, got {self.lam}")


def charbonnier_eigenvalue(p, lam):
    """Diffusivity across the edge: ``(1 + |p|^2 / lam^2) ** -0.5``.

    ``p`` is a gradient vector or an (..., 2) stack of them; the result drops
    the last axis. Decreases monotonically from 1 at p = 0 towards 0.
    """
    if not lam > 0:
        raise ValueError(f"lam must be positive, got {lam}")
    p = np.asarray(p, dtype=np.float64)
    if p.shape[-1] != 2:
        raise ValueError(f"gradient vectors must have a trailing axis of size 2, got {p.shape}")
    mag2 = p[..., 0] ** 2 + p[..., 1] ** 2
    return 1.0 / np.sqrt(1.0 + mag2 / lam**2)


def assemble_tensor(grad, params):
    """Build the per-pixel diffusion tensor from a gradient field.

    With v = grad and g the Charbonnier eigenvalue:
    ``a = (vy^2 + g vx^2)/|v|^2``, ``b = (g - 1) vx vy / |v|^2``,
    ``c = (vx^2 + g vy^2)/|v|^2``; identity where v = 0.
    """
    grad = np.asarray(grad, dtype=np.float64)
    vx = grad[..., 0]
    vy = grad[..., 1]
    mag2 = vx**2 + vy**2
    g = 1.0 / np.sqrt(1.0 + mag2 / params.lam**2)
    safe = np.where(mag2 > 0, mag2, 1.0)
    a = np.where(mag2 > 0, (vy**2 + g * vx**2) / safe, 1.0)
    b = np.where(mag2 > 0, (g - 1.0) * vx * vy / safe, 0.0)
    c = np.where(mag2 > 0, (vx**2 + g * vy**2) / safe, 1.0)
    return np.stack([a, b, c], axis=-1)


def apply_tensor(field, vec):
    """Matrix-vector product D @ vec per pixel; both operands (..., k) arrays."""
    a, b, c = field[..., 0], field[..., 1], field[..., 2]
    out = np.empty_like(vec)
    out[..., 0] = a * vec[..., 0] + b * vec[..., 1]
    out[..., 1] = b * vec[..., 0] + c * vec[..., 1]
    return out


def quadratic_form(field, vec):
    """``D vec . vec`` per pixel."""
    a, b, c = field[..., 0], field[..., 1], field[..., 2]
    x, y = vec[..., 0], vec[..., 1]
    return a * x * x + 2.0 * b * x * y + c * y * y


@dataclass(frozen=True)
class EllipticityReport:
    """Worst-case slack of the two-sided ellipticity envelope over a test battery."""

    worst_lower_violation: float
    worst_upper_violation: float
    n_checked: int
    tolerance: float = 1e-12

    @property
    def passed(self):
        return (
            self.worst_lower_violation <= self.tolerance
            and self.worst_upper_violation <= self.tolerance
        )


def check_ellipticity(field, grad, lam, n_directions=16):
    """Verify the pointwise envelope ``g(|p|) |q|^2 <= D q . q <= |q|^2``.

    Tests every pixel against a fixed battery of unit directions q (the
    envelope is homogeneous in |q|, so unit vectors suffice). Returns a report
    with the worst violation of each side; does not raise on failure.
    """
    grad = np.asarray(grad, dtype=np.float64)
    lower = charbonnier_eigenvalue(grad, lam)
    angles = np.arange(n_directions) * (np.pi / n_directions)
    worst_lower = -np.inf
    worst_upper = -np.inf
    for theta in angles:
        q = np.broadcast_to(
            np.array([np.cos(theta), np.sin(theta)]), grad.shape
        )
        val = quadratic_form(field, q)
        worst_lower = max(worst_lower, float((lower - val).max()))
        worst_upper = max(worst_upper, float((val - 1.0).max()))
    n = int(np.prod(grad.shape[:-1])) * n_directions
    return EllipticityReport(worst_lower, worst_upper, n)
