"""Probabilistic mask sparsification.

Starting from the fully known image, each round removes a random fraction of
the known pixels, reconstructs by fixed-point inpainting, and puts back the
removed pixels that reconstruct worst. Pixels that diffusion recovers well
stay removed, so the surviving mask concentrates where the image is hard to
inpaint (near edges). Both the removal and return counts are fractions of the
current known set, so each round strictly shrinks the mask.
"""

from dataclasses import dataclass

import numpy as np

from .fixed_point import FixedPointConfig, iterate
from .solver import SolverConfig
from .tensor import EedParams
from .validation import as_data_image


@dataclass(frozen=True)
class SparsifyConfig:
    """Defaults remove 2% of the mask per round and re-add the worst half."""

    target_density: float = 0.10
    candidate_fraction: float = 0.02
    return_fraction: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.target_density < 1.0:
            raise ValueError(f"target_density must lie in (0, 1), got {self.target_density}")
        if not 0.0 < self.return_fraction < self.candidate_fraction < 1.0:
            raise ValueError(
                "need 0 < return_fraction < candidate_fraction < 1, got "
                f"q={self.return_fraction}, p={self.candidate_fraction}"
            )


def probabilistic_sparsify(
    f,
    cfg=SparsifyConfig(),
    params=EedParams(),
    fp_cfg=FixedPointConfig(),
    solver_cfg=SolverConfig(),
):
    """Select a known-pixel mask of the target density for the image ``f``.

    Deterministic under ``cfg.seed``; error ties are broken by row-major pixel
    index. If an inner reconstruction fails to converge the round is retried
    once with doubled outer-iteration budget, then the run errors.

    Returns the boolean known mask.
    """
    f = as_data_image(f, name="f")
    cfg = cfg if isinstance(cfg, SparsifyConfig) else SparsifyConfig(**cfg)
    rng = np.random.default_rng(cfg.seed)
    known = np.ones(f.shape, dtype=bool)
    target = cfg.target_density * f.size

    while known.sum() > target:
        n_known = int(known.sum())
        n_remove = int(round(cfg.candidate_fraction * n_known))
        n_remove = max(1, min(n_remove, n_known - 1))
        candidates = rng.choice(np.flatnonzero(known.ravel()), size=n_remove, replace=False)
        trial = known.copy()
        trial.ravel()[candidates] = False

        recon = _reconstruct(f, trial, params, fp_cfg, solver_cfg)
        errors = np.abs(recon.ravel()[candidates] - f.ravel()[candidates])

        n_back = int(round(cfg.return_fraction * n_known))
        n_back = max(0, min(n_back, n_remove - 1))
        if n_back:
            # primary key: largest error; ties: smallest row-major index
            order = np.lexsort((candidates, -errors))
            trial.ravel()[candidates[order[:n_back]]] = True
        known = trial
    return known


def _reconstruct(f, known, params, fp_cfg, solver_cfg):
    u, report = iterate(f, known, params=params, cfg=fp_cfg, solver_cfg=solver_cfg)
    if report.status == "converged":
        return u
    retry_cfg = FixedPointConfig(
        j_tol=fp_cfg.j_tol,
        max_outer=2 * fp_cfg.max_outer,
        record_norms=fp_cfg.record_norms,
    )
    u, report = iterate(f, known, params=params, cfg=retry_cfg, solver_cfg=solver_cfg)
    if report.status == "converged":
        return u
    raise RuntimeError(
        "sparsification round failed: inner reconstruction did not converge "
        f"within {retry_cfg.max_outer} outer iterations"
    )
