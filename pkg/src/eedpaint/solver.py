"""Matrix-free elliptic solver for one lagged-diffusivity step.

One step freezes the diffusion tensor at the previous iterate and minimizes
the quadratic energy ``sum_x D(x) grad(v)(x) . grad(v)(x)`` over images that
agree with the data on known pixels. The sum runs over every gradient sample
whose forward stencil touches an unknown pixel; restricting it to unknown
pixels only would leave Dirichlet values to the left/top of the unknown
region uncoupled and the standard 5-point structure would be lost. Dirichlet
pixels are eliminated, giving a symmetric positive definite system solved by
(Jacobi-)preconditioned conjugate gradients.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .grid import divergence, gradient
from .smoothing import smoothed_gradient
from .tensor import EedParams, apply_tensor, assemble_tensor, quadratic_form
from .validation import as_data_image, as_image, as_mask


class SingularSystemError(RuntimeError):
    """An unknown component has no contact with known data."""

    def __init__(self, message, component_pixel=None):
        super().__init__(message)
        self.component_pixel = component_pixel


class CgBreakdownError(RuntimeError):
    """Non-positive curvature encountered; the operator is not SPD."""


class CgConvergenceError(RuntimeError):
    """Conjugate gradients did not reach the target residual."""

    def __init__(self, message, residual_history):
        super().__init__(message)
        self.residual_history = residual_history


@dataclass(frozen=True)
class SolverConfig:
    """Conjugate-gradient settings.

    ``cg_max_iter=None`` means ten times the number of unknowns.
    """

    cg_tol: float = 1e-10
    cg_max_iter: int | None = None
    preconditioner: str = "diagonal"

    def __post_init__(self):
        if not 0.0 < self.cg_tol < 1.0:
            raise ValueError(f"cg_tol must lie in (0, 1), got {self.cg_tol}")
        if self.cg_max_iter is not None and self.cg_max_iter < 1:
            raise ValueError(f"cg_max_iter must be >= 1, got {self.cg_max_iter}")
        if self.preconditioner not in ("none", "diagonal"):
            raise ValueError(f"unknown preconditioner {self.preconditioner!r}")


@dataclass(frozen=True)
class CgStats:
    iterations: int
    relative_residual: float
    residual_history: tuple


def energy_sample_mask(known):
    """Gradient-sample locations whose forward stencil touches an unknown pixel."""
    unknown = ~known
    sample = unknown.copy()
    sample[:, :-1] |= unknown[:, 1:]
    sample[:-1, :] |= unknown[1:, :]
    return sample


def discrete_energy(v, tensor, known):
    """Quadratic diffusion energy of an image under a frozen tensor field.

    Sums ``D grad(v) . grad(v)`` over the energy sample set of ``known``;
    nonnegative, and zero exactly for constant images.
    """
    v = as_image(v, name="v")
    known = as_mask(known, shape=v.shape)
    quad = quadratic_form(tensor, gradient(v))
    return float(quad[energy_sample_mask(known)].sum())


@dataclass
class LinearSystem:
    """Dirichlet-eliminated SPD system over the unknown pixels (matrix-free)."""

    known: np.ndarray
    tensor: np.ndarray
    sample: np.ndarray
    b: np.ndarray
    n: int

    def embed(self, x, fill=0.0):
        """Scatter an unknown-pixel vector onto the full grid."""
        z = np.full(self.known.shape, fill, dtype=np.float64)
        z[~self.known] = x
        return z

    def matvec(self, x):
        """Apply the eliminated operator: restriction of -div(D grad) to unknowns."""
        z = self.embed(x)
        flux = apply_tensor(self.tensor, gradient(z))
        flux[~self.sample] = 0.0
        return -divergence(flux)[~self.known]

    def diagonal(self):
        """Exact operator diagonal, used by the Jacobi preconditioner."""
        a = self.tensor[..., 0]
        b = self.tensor[..., 1]
        c = self.tensor[..., 2]
        cx = np.ones(self.known.shape)
        cx[:, -1] = 0.0
        cy = np.ones(self.known.shape)
        cy[-1, :] = 0.0
        diag = np.where(self.sample, a * cx**2 + 2.0 * b * cx * cy + c * cy**2, 0.0)
        diag[:, 1:] += np.where(self.sample[:, :-1], a[:, :-1], 0.0)
        diag[1:, :] += np.where(self.sample[:-1, :], c[:-1, :], 0.0)
        return diag[~self.known]


def _check_components(known):
    """Every 4-connected unknown component must touch known data."""
    unknown = ~known
    structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
    labels, n_comp = ndimage.label(unknown, structure=structure)
    contact = np.zeros_like(unknown)
    contact[:, 1:] |= known[:, :-1]
    contact[:, :-1] |= known[:, 1:]
    contact[1:, :] |= known[:-1, :]
    contact[:-1, :] |= known[1:, :]
    for comp in range(1, n_comp + 1):
        members = labels == comp
        if not (contact & members).any():
            j, i = np.argwhere(members)[0]
            raise SingularSystemError(
                f"unknown component at pixel (row={j}, col={i}) has no known neighbor",
                component_pixel=(int(j), int(i)),
            )


def assemble_system(tensor, known, f):
    """Eliminate Dirichlet pixels and form the right-hand side from the data."""
    f = as_image(f, name="f")
    known = as_mask(known, shape=f.shape)
    n = int((~known).sum())
    if n == 0:
        raise ValueError("mask has no unknowns")
    _check_components(known)
    sample = energy_sample_mask(known)
    z = np.where(known, f, 0.0)
    flux = apply_tensor(tensor, gradient(z))
    flux[~sample] = 0.0
    b = divergence(flux)[~known]
    return LinearSystem(known=known, tensor=tensor, sample=sample, b=b, n=n)


def cg(system, x0=None, cfg=SolverConfig()):
    """Preconditioned conjugate gradients on an SPD system.

    Stops when the residual drops below ``cfg.cg_tol`` relative to |b|.
    Raises :class:`CgConvergenceError` (carrying the residual history) if the
    iteration cap is hit, :class:`CgBreakdownError` on non-positive curvature.
    """
    b = system.b
    n = b.size
    max_iter = cfg.cg_max_iter if cfg.cg_max_iter is not None else 10 * n
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return np.zeros(n), CgStats(0, 0.0, (0.0,))
    if cfg.preconditioner == "diagonal":
        inv_diag = 1.0 / system.diagonal()
    else:
        inv_diag = np.ones(n)

    x = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
    r = b - system.matvec(x) if x.any() else b.copy()
    history = [float(np.linalg.norm(r)) / b_norm]
    if history[-1] <= cfg.cg_tol:
        return x, CgStats(0, history[-1], tuple(history))
    z = inv_diag * r
    p = z.copy()
    rz = float(r @ z)
    for it in range(1, max_iter + 1):
        ap = system.matvec(p)
        pap = float(p @ ap)
        if pap <= 0.0:
            raise CgBreakdownError(
                f"non-positive curvature {pap:.3e} at iteration {it}; operator is not SPD"
            )
        alpha = rz / pap
        x += alpha * p
        r -= alpha * ap
        rel = float(np.linalg.norm(r)) / b_norm
        history.append(rel)
        if rel <= cfg.cg_tol:
            return x, CgStats(it, rel, tuple(history))
        z = inv_diag * r
        rz_next = float(r @ z)
        p = z + (rz_next / rz) * p
        rz = rz_next
    raise CgConvergenceError(
        f"conjugate gradients stalled at relative residual {history[-1]:.3e} "
        f"after {max_iter} iterations",
        residual_history=tuple(history),
    )


@dataclass(frozen=True)
class SolveStats:
    """Statistics of one lagged-diffusivity solve."""

    cg: CgStats
    energy: float
    overshoot_low: float
    overshoot_high: float


def _lagged_step(w, f, known, params, cfg):
    """Internal step returning the tensor as well, to avoid recomputation."""
    grad_s = smoothed_gradient(w, known, params.sigma)
    tensor = assemble_tensor(grad_s, params)
    system = assemble_system(tensor, known, f)
    x, cg_stats = cg(system, x0=np.asarray(w, dtype=np.float64)[~known], cfg=cfg)
    u = np.array(f, dtype=np.float64)
    u[~known] = x
    stats = SolveStats(
        cg=cg_stats,
        energy=discrete_energy(u, tensor, known),
        overshoot_low=float(max(0.0, f[known].min() - u.min())),
        overshoot_high=float(max(0.0, u.max() - f[known].max())),
    )
    return u, stats, tensor


def lagged_diffusivity_step(w, f, known, params=EedParams(), cfg=SolverConfig()):
    """One step of the lagged-diffusivity operator.

    Freezes the tensor at ``w`` (smoothed over the unknown region only) and
    returns the energy minimizer that equals ``f`` exactly on known pixels,
    together with solve statistics. This is the linear elliptic inpainting
    solve; iterating it is the nonlinear fixed-point method.
    """
    f = as_data_image(f, name="f")
    known = as_mask(known, shape=f.shape)
    w = as_image(w, name="w")
    if w.shape != f.shape:
        raise ValueError(f"w shape {w.shape} does not match f shape {f.shape}")
    u, stats, _ = _lagged_step(w, f, known, params, cfg)
    return u, stats
