"""Scikit-learn style wrappers around the functional core.

``EEDInpainter`` is a transformer that fills NaN pixels of a 2-D image, so it
slots into pipelines the way imputers do. ``ProbabilisticSparsifier`` learns
a known-pixel mask from a complete image and transforms images by blanking
everything outside it, which makes ``sparsifier.fit_transform`` followed by
``inpainter.transform`` the full compression round trip.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .fixed_point import FixedPointConfig, iterate
from .solver import SolverConfig
from .sparsify import SparsifyConfig, probabilistic_sparsify
from .tensor import EedParams
from .validation import as_data_image, as_mask


class EEDInpainter(TransformerMixin, BaseEstimator):
    """Fill missing (NaN) pixels by edge-enhancing diffusion inpainting.

    Parameters mirror the solver defaults: ``sigma`` is the pre-smoothing
    scale, ``lam`` the contrast parameter, ``j_tol``/``max_outer`` control the
    outer fixed-point loop and ``cg_tol`` the inner linear solves.
    """

    def __init__(self, sigma=0.8, lam=1.0, j_tol=1e-8, max_outer=100,
                 cg_tol=1e-10, preconditioner="diagonal"):
        self.sigma = sigma
        self.lam = lam
        self.j_tol = j_tol
        self.max_outer = max_outer
        self.cg_tol = cg_tol
        self.preconditioner = preconditioner

    def _configs(self):
        return (
            EedParams(sigma=self.sigma, lam=self.lam),
            FixedPointConfig(j_tol=self.j_tol, max_outer=self.max_outer),
            SolverConfig(cg_tol=self.cg_tol, preconditioner=self.preconditioner),
        )

    def fit(self, X, y=None):
        """Stateless validation; the transform solves each image on its own."""
        self._configs()
        return self

    def transform(self, X):
        """Inpaint a 2-D image whose unknown pixels are NaN."""
        X = np.asarray(X, dtype=np.float64)
        known = ~np.isnan(X)
        image, report = self.inpaint(np.where(known, X, 0.0), known)
        self.report_ = report
        return image

    def inpaint(self, image, known):
        """Explicit-mask form; returns ``(image, iteration_report)``."""
        image = as_data_image(image, name="image")
        known = as_mask(known, shape=image.shape)
        params, fp_cfg, solver_cfg = self._configs()
        return iterate(image, known, params=params, cfg=fp_cfg, solver_cfg=solver_cfg)


class ProbabilisticSparsifier(TransformerMixin, BaseEstimator):
    """Learn a sparse known-pixel mask that inpaints the fitted image well.

    ``fit`` runs probabilistic sparsification and stores the mask as
    ``mask_``; ``transform`` blanks (NaN) every pixel outside the mask, which
    composes directly with :class:`EEDInpainter`.
    """

    def __init__(self, target_density=0.10, candidate_fraction=0.02,
                 return_fraction=0.01, seed=0, sigma=0.8, lam=1.0,
                 j_tol=1e-6, max_outer=30, cg_tol=1e-8):
        self.target_density = target_density
        self.candidate_fraction = candidate_fraction
        self.return_fraction = return_fraction
        self.seed = seed
        self.sigma = sigma
        self.lam = lam
        self.j_tol = j_tol
        self.max_outer = max_outer
        self.cg_tol = cg_tol

    def fit(self, X, y=None):
        X = as_data_image(X, name="X")
        self.mask_ = probabilistic_sparsify(
            X,
            cfg=SparsifyConfig(
                target_density=self.target_density,
                candidate_fraction=self.candidate_fraction,
                return_fraction=self.return_fraction,
                seed=self.seed,
            ),
            params=EedParams(sigma=self.sigma, lam=self.lam),
            fp_cfg=FixedPointConfig(j_tol=self.j_tol, max_outer=self.max_outer),
            solver_cfg=SolverConfig(cg_tol=self.cg_tol),
        )
        return self

    def transform(self, X):
        """Keep pixels on the fitted mask, set the rest to NaN."""
        if not hasattr(self, "mask_"):
            raise RuntimeError("ProbabilisticSparsifier must be fitted before transform")
        X = np.asarray(X, dtype=np.float64)
        if X.shape != self.mask_.shape:
            raise ValueError(f"X shape {X.shape} does not match fitted mask {self.mask_.shape}")
        return np.where(self.mask_, X, np.nan)
