"""Edge-enhancing diffusion (EED) image inpainting.

Reconstructs missing image regions as the steady state of an anisotropic
diffusion process whose tensor steers smoothing along image edges. The
package provides the discrete elliptic solver, the lagged-diffusivity
fixed-point iteration, a diagnostics suite that audits the a-priori bounds
of the iteration at desk scale, probabilistic mask sparsification, PGM I/O,
a CLI, and scikit-learn style estimators.
"""

__version__ = "0.1.0"

from .diagnostics import (
    BoundReport,
    DomainConstants,
    Inequality,
    audit_iteration,
    boundedness_threshold,
    check_energy_chain,
    check_geometric_bound,
    check_one_step_bound,
    check_sequence_bound,
    check_smoothed_gradient_bound,
    estimate_domain_constants,
    geometric_bound_rhs,
    one_step_constants,
    sequence_bound_rhs,
)
from .estimators import EEDInpainter, ProbabilisticSparsifier
from .fixed_point import (
    FixedPointConfig,
    IterationRecord,
    IterationReport,
    default_initial_guess,
    fixed_point_defect,
    iterate,
    lag_residual,
)
from .grid import divergence, gradient, gradient_magnitude, norm_l1, norm_w11, seminorm_w11
from .pgm import (
    read_image,
    read_known_mask,
    read_pgm,
    write_image,
    write_known_mask,
    write_pgm,
)
from .smoothing import GaussianKernel, build_kernel, smooth_on_g, smoothed_gradient
from .solver import (
    CgBreakdownError,
    CgConvergenceError,
    LinearSystem,
    SingularSystemError,
    SolverConfig,
    assemble_system,
    cg,
    discrete_energy,
    energy_sample_mask,
    lagged_diffusivity_step,
)
from .sparsify import SparsifyConfig, probabilistic_sparsify
from .tensor import (
    EedParams,
    assemble_tensor,
    charbonnier_eigenvalue,
    check_ellipticity,
)

__all__ = [
    "__version__",
    "BoundReport",
    "CgBreakdownError",
    "CgConvergenceError",
    "DomainConstants",
    "EEDInpainter",
    "EedParams",
    "FixedPointConfig",
    "GaussianKernel",
    "Inequality",
    "IterationRecord",
    "IterationReport",
    "LinearSystem",
    "ProbabilisticSparsifier",
    "SingularSystemError",
    "SolverConfig",
    "SparsifyConfig",
    "assemble_system",
    "assemble_tensor",
    "audit_iteration",
    "boundedness_threshold",
    "build_kernel",
    "cg",
    "charbonnier_eigenvalue",
    "check_ellipticity",
    "check_energy_chain",
    "check_geometric_bound",
    "check_one_step_bound",
    "check_sequence_bound",
    "check_smoothed_gradient_bound",
    "default_initial_guess",
    "discrete_energy",
    "divergence",
    "energy_sample_mask",
    "estimate_domain_constants",
    "fixed_point_defect",
    "geometric_bound_rhs",
    "gradient",
    "gradient_magnitude",
    "iterate",
    "lag_residual",
    "lagged_diffusivity_step",
    "norm_l1",
    "norm_w11",
    "one_step_constants",
    "probabilistic_sparsify",
    "read_image",
    "read_known_mask",
    "read_pgm",
    "seminorm_w11",
    "sequence_bound_rhs",
    "smooth_on_g",
    "smoothed_gradient",
    "write_image",
    "write_known_mask",
    "write_pgm",
]
