"""Fixed-point iteration of the lagged-diffusivity operator.

The iteration repeatedly applies the linearized solve and stops when the
fixed-point defect -- the squared gradient distance between an iterate and
its image under the operator, summed over the unknown region -- falls below
a threshold. The defect is the natural stopping functional: it vanishes
exactly at fixed points, i.e. at weak solutions of the nonlinear problem.
"""

from dataclasses import dataclass

import numpy as np

from .grid import gradient, norm_l1, norm_w11, seminorm_w11
from .solver import SolverConfig, _lagged_step, discrete_energy
from .tensor import EedParams
from .validation import as_data_image, as_image, as_mask


@dataclass(frozen=True)
class FixedPointConfig:
    j_tol: float = 1e-8
    max_outer: int = 100
    record_norms: bool = True

    def __post_init__(self):
        if not (self.j_tol > 0 and np.isfinite(self.j_tol)):
            raise ValueError(f"j_tol must be positive and finite, got {self.j_tol}")
        if self.max_outer < 1:
            raise ValueError(f"max_outer must be >= 1, got {self.max_outer}")


@dataclass(frozen=True)
class IterationRecord:
    """Per-iterate trace entry; norms may be None when recording is off."""

    index: int
    defect: float
    energy: float | None
    energy_comparison: float | None
    l1_norm: float | None
    w11_seminorm: float | None
    cg_iterations: int
    cg_residual: float

    def to_dict(self):
        return {
            "index": self.index,
            "defect": self.defect,
            "energy": self.energy,
            "energy_comparison": self.energy_comparison,
            "l1_norm": self.l1_norm,
            "w11_seminorm": self.w11_seminorm,
            "cg_iterations": self.cg_iterations,
            "cg_residual": self.cg_residual,
        }


@dataclass(frozen=True)
class IterationReport:
    records: tuple
    status: str  # 'converged' | 'max_iter'
    converged_index: int | None

    def to_dict(self):
        return {
            "status": self.status,
            "converged_index": self.converged_index,
            "records": [r.to_dict() for r in self.records],
        }

    def seminorm_trace(self):
        """W11 seminorms of the recorded iterates, in order."""
        return [r.w11_seminorm for r in self.records]


def default_initial_guess(f, known):
    """Data on known pixels, mean of the known data elsewhere."""
    f = as_data_image(f, name="f")
    known = as_mask(known, shape=f.shape)
    u0 = f.copy()
    u0[~known] = f[known].mean()
    return u0


def _defect(u, v, unknown):
    """Squared gradient distance between two images over the unknown region."""
    d = gradient(u) - gradient(v)
    return float((d[..., 0] ** 2 + d[..., 1] ** 2)[unknown].sum())


def fixed_point_defect(u, f, known, params=EedParams(), solver_cfg=SolverConfig()):
    """Defect of ``u``: squared gradient distance to its lagged-diffusivity image.

    Requires ``u == f`` on known pixels. Zero (to solver tolerance) exactly
    when ``u`` is a discrete fixed point.
    """
    f = as_data_image(f, name="f")
    known = as_mask(known, shape=f.shape)
    u = as_image(u, name="u")
    if not np.array_equal(u[known], f[known]):
        raise ValueError("u must equal f on known pixels")
    v, _, _ = _lagged_step(u, f, known, params, solver_cfg)
    return _defect(u, v, ~known)


def iterate(
    f,
    known,
    params=EedParams(),
    cfg=FixedPointConfig(),
    solver_cfg=SolverConfig(),
    u0=None,
):
    """Run the fixed-point iteration from ``u0`` (default: mean-filled data).

    Returns ``(u, report)`` where ``u`` is the first iterate whose defect is
    at most ``cfg.j_tol`` (status 'converged'), or the last iterate after
    ``cfg.max_outer`` solves (status 'max_iter'; not an exception, the trace
    is still useful data). Deterministic: identical inputs give bit-identical
    results.
    """
    f = as_data_image(f, name="f")
    known = as_mask(known, shape=f.shape)
    unknown = ~known
    if u0 is None:
        u = default_initial_guess(f, known)
    else:
        u = as_image(u0, name="u0")
        if u.shape != f.shape:
            raise ValueError(f"u0 shape {u.shape} does not match f shape {f.shape}")
        if not np.array_equal(u[known], f[known]):
            raise ValueError("u0 must equal f on known pixels")
        u = u.copy()

    records = []
    for j in range(cfg.max_outer):
        v, stats, tensor = _lagged_step(u, f, known, params, solver_cfg)
        defect = _defect(u, v, unknown)
        if cfg.record_norms:
            record = IterationRecord(
                index=j,
                defect=defect,
                energy=discrete_energy(v, tensor, known),
                energy_comparison=discrete_energy(f, tensor, known),
                l1_norm=norm_l1(u, unknown),
                w11_seminorm=seminorm_w11(u, unknown),
                cg_iterations=stats.cg.iterations,
                cg_residual=stats.cg.relative_residual,
            )
        else:
            record = IterationRecord(
                index=j,
                defect=defect,
                energy=None,
                energy_comparison=None,
                l1_norm=None,
                w11_seminorm=None,
                cg_iterations=stats.cg.iterations,
                cg_residual=stats.cg.relative_residual,
            )
        records.append(record)
        if defect <= cfg.j_tol:
            return u, IterationReport(tuple(records), "converged", j)
        u = v
    return u, IterationReport(tuple(records), "max_iter", None)


def lag_residual(
    f,
    known,
    params=EedParams(),
    n=1,
    k=1,
    solver_cfg=SolverConfig(),
    u0=None,
):
    """Norm of the difference between iterates ``n`` steps apart.

    Runs exactly ``n + k`` solves (no early stopping) and returns the full
    first-order norm of ``u^(n+k) - u^(k)`` over the unknown region. This
    measures how far ``u^(k)`` is from being a fixed point of the n-fold
    iterated operator.
    """
    if n < 1 or k < 0:
        raise ValueError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    f = as_data_image(f, name="f")
    known = as_mask(known, shape=f.shape)
    u = default_initial_guess(f, known) if u0 is None else as_image(u0, name="u0").copy()
    u_at_k = u.copy()
    for j in range(n + k):
        if j == k:
            u_at_k = u.copy()
        u, _, _ = _lagged_step(u, f, known, params, solver_cfg)
    return norm_w11(u - u_at_k, ~known)
