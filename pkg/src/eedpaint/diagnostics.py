"""Numerical audits of the a-priori estimates behind the fixed-point method.

Two kinds of checks live here. Chain checks (the energy/Cauchy-Schwarz chain
and the minimality comparison) are discrete identities and must pass on every
input. Constant-dependent checks (the one-step gradient bound, its iterated
closed form, and the large-smoothing geometric bound) involve the Poincare
and trace constants of the unknown region, which are only known through
randomized lower-bound estimation; those checks are audits. A failure with
the raw estimates means "constants under-estimated", while a failure with the
estimates inflated tenfold ("structural") indicates an implementation bug.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .grid import gradient, norm_l1, norm_w11, seminorm_w11
from .smoothing import smoothed_gradient
from .solver import SolverConfig, _lagged_step, discrete_energy, energy_sample_mask
from .tensor import EedParams
from .validation import as_data_image, as_image, as_mask

PASS_TOL = 1e-9
INFLATION = 10.0


def _json_float(x):
    """Strict-JSON float: non-finite values (vacuous bounds) become null."""
    if x is None or not math.isfinite(x):
        return None
    return float(x)


class DomainConstants(NamedTuple):
    """Lower-bound estimates of the Poincare and trace constants."""

    poincare: float
    trace: float

    def inflated(self, factor=INFLATION):
        return DomainConstants(self.poincare * factor, self.trace * factor)


@dataclass(frozen=True)
class Inequality:
    """One audited inequality; ``rhs_inflated`` present only for audits."""

    name: str
    lhs: float
    rhs: float
    rhs_inflated: float | None = None

    @property
    def scale(self):
        return max(1.0, abs(self.lhs), abs(self.rhs))

    @property
    def slack(self):
        return self.rhs - self.lhs

    @property
    def passed(self):
        return self.lhs <= self.rhs + PASS_TOL * self.scale

    @property
    def structural_fail(self):
        if self.rhs_inflated is None:
            return False
        scale = max(1.0, abs(self.lhs), abs(self.rhs_inflated))
        return not (self.lhs <= self.rhs_inflated + PASS_TOL * scale)

    def to_dict(self):
        return {
            "name": self.name,
            "lhs": _json_float(self.lhs),
            "rhs": _json_float(self.rhs),
            "rhs_inflated": _json_float(self.rhs_inflated),
            "slack": _json_float(self.slack),
            "passed": bool(self.passed),
            "structural_fail": bool(self.structural_fail),
        }


@dataclass(frozen=True)
class BoundReport:
    name: str
    inequalities: tuple
    constants: dict = field(default_factory=dict)
    context: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(q.passed for q in self.inequalities)

    @property
    def structural_failures(self):
        return sum(1 for q in self.inequalities if q.structural_fail)

    def to_dict(self):
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "structural_failures": self.structural_failures,
            "inequalities": [q.to_dict() for q in self.inequalities],
            "constants": {
                k: _json_float(v) if isinstance(v, float) else v
                for k, v in self.constants.items()
            },
            "context": dict(self.context),
        }


def _context(known, params):
    known = np.asarray(known)
    return {
        "grid": list(known.shape),
        "mask_density": float(known.mean()),
        "sigma": params.sigma,
        "lam": params.lam,
    }


def boundary_of_unknown(known):
    """Unknown pixels adjacent (4-neighborhood) to known data or the image border."""
    unknown = ~known
    adj = np.zeros_like(unknown)
    adj[:, 1:] |= known[:, :-1]
    adj[:, :-1] |= known[:, 1:]
    adj[1:, :] |= known[:-1, :]
    adj[:-1, :] |= known[1:, :]
    border = np.zeros_like(unknown)
    border[0, :] = border[-1, :] = True
    border[:, 0] = border[:, -1] = True
    return unknown & (adj | border)


def _probe_fields(known, rng, n_samples):
    """Deterministic probes followed by seeded random fields (a prefix sequence)."""
    h, w = known.shape
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    probes = [
        np.ones((h, w)),
        xx / max(w - 1, 1),
        yy / max(h - 1, 1),
        (xx + yy) / max(w + h - 2, 1),
        ndimage.distance_transform_edt(~known),
    ]
    for j, i in np.argwhere(boundary_of_unknown(known))[:8]:
        bump = np.zeros((h, w))
        bump[j, i] = 1.0
        probes.append(bump)
    smooth_cycle = (0.0, 1.0, 2.0, 4.0)
    for s in range(n_samples):
        raw = rng.standard_normal((h, w))
        width = smooth_cycle[s % len(smooth_cycle)]
        probes.append(ndimage.gaussian_filter(raw, width) if width else raw)
    return probes


def estimate_domain_constants(known, n_samples=200, seed=0):
    """Sampled lower bounds for the Poincare and trace constants of the domain.

    The Poincare candidates vanish on known pixels and maximize
    ``(l1 + w11-seminorm) / w11-seminorm``; the trace candidates are
    unconstrained and maximize the boundary l1 norm against the full W11
    norm. Larger sample counts can only increase the estimates (running max
    over a seed-deterministic sequence).
    """
    known = as_mask(known)
    if n_samples < 100:
        raise ValueError(f"need n_samples >= 100, got {n_samples}")
    unknown = ~known
    boundary = boundary_of_unknown(known)
    rng = np.random.default_rng(seed)
    c_p = 0.0
    c_t = 0.0
    for probe in _probe_fields(known, rng, n_samples):
        zeroed = np.where(known, 0.0, probe)
        semi = seminorm_w11(zeroed, unknown)
        l1 = norm_l1(zeroed, unknown)
        if semi > 1e-12 * max(1.0, l1):
            c_p = max(c_p, (l1 + semi) / semi)
        full = norm_w11(probe, unknown)
        trace_l1 = float(np.abs(probe[boundary]).sum())
        if full > 1e-12 * max(1.0, trace_l1):
            c_t = max(c_t, trace_l1 / full)
    return DomainConstants(c_p, c_t)


def check_energy_chain(w, f, known, params=EedParams(), solver_cfg=SolverConfig()):
    """Chain check: both steps are discrete identities and must always pass.

    With u the linearized solve at frozen tensor D(w):
    (i) the W11 seminorm of u is bounded by sqrt(energy) * sqrt(B), where B
        sums ``sqrt(lam^2 + |grad w_smoothed|^2) / lam`` over the unknowns
        (Cauchy-Schwarz plus the ellipticity floor);
    (ii) the energy of u is bounded by the energy of the data (minimality)
        and hence by the plain Dirichlet energy of the data (ellipticity
        ceiling), both over the same gradient-sample set as the energy.
    """
    f = as_data_image(f, name="f")
    known = as_mask(known, shape=f.shape)
    w = as_image(w, name="w")
    unknown = ~known
    u, _, tensor = _lagged_step(w, f, known, params, solver_cfg)
    energy_u = discrete_energy(u, tensor, known)
    energy_f = discrete_energy(f, tensor, known)

    grad_s = smoothed_gradient(w, known, params.sigma)
    mag2 = grad_s[..., 0] ** 2 + grad_s[..., 1] ** 2
    b_sum = float(
        (np.sqrt(params.lam**2 + mag2)[unknown]).sum() / params.lam
    )
    gf = gradient(f)
    dirichlet_f = float(
        ((gf[..., 0] ** 2 + gf[..., 1] ** 2)[energy_sample_mask(known)]).sum()
    )
    inequalities = (
        Inequality("cauchy_schwarz", seminorm_w11(u, unknown), math.sqrt(energy_u * b_sum)),
        Inequality("minimality", energy_u, energy_f),
        Inequality("dirichlet_comparison", energy_u, dirichlet_f),
    )
    return BoundReport(
        "energy_chain",
        inequalities,
        constants={"energy": energy_u, "b_sum": b_sum},
        context=_context(known, params),
    )


def _data_gradient_l2(f, known):
    """l2 norm of the data gradient over the energy's sample set.

    The collar samples matter: on a well-sparsified mask the data jumps sit
    exactly at known pixels, so the unknown-only norm would be zero while the
    minimizer it bounds (through the energy comparison) is not.
    """
    gf = gradient(f)
    quad = (gf[..., 0] ** 2 + gf[..., 1] ** 2)[energy_sample_mask(known)]
    return math.sqrt(float(quad.sum()))


def one_step_constants(f, known, params, constants):
    """Offset/gain pair of the one-step gradient bound.

    The bound reads ``w11(step(w)) <= offset + gain * sqrt(w11(w))`` with
    offset and gain built from the data norms, the unknown-pixel count, the
    contrast parameter and the (estimated) domain constants.
    """
    f = as_data_image(f, name="f")
    known = as_mask(known, shape=f.shape)
    unknown = ~known
    grad_l2 = _data_gradient_l2(f, known)
    area = float(unknown.sum())
    f_w11 = norm_w11(f, unknown)
    c_p, c_t = constants.poincare, constants.trace
    lam = params.lam
    offset = grad_l2 * (
        math.sqrt(area) + math.sqrt(c_t / lam) * math.sqrt(1.0 + c_p) * math.sqrt(f_w11)
    )
    gain = grad_l2 * math.sqrt((1.0 + c_t * c_p) / lam)
    return offset, gain


def check_one_step_bound(
    w, f, known, params, constants, solver_cfg=SolverConfig()
):
    """Audit the one-step gradient bound for a single input ``w``."""
    f = as_data_image(f, name="f")
    known = as_mask(known, shape=f.shape)
    w = as_image(w, name="w")
    unknown = ~known
    u, _, _ = _lagged_step(w, f, known, params, solver_cfg)
    lhs = seminorm_w11(u, unknown)
    w_semi = seminorm_w11(w, unknown)
    offset, gain = one_step_constants(f, known, params, constants)
    offset_i, gain_i = one_step_constants(f, known, params, constants.inflated())
    ineq = Inequality(
        "one_step",
        lhs,
        offset + gain * math.sqrt(w_semi),
        offset_i + gain_i * math.sqrt(w_semi),
    )
    return BoundReport(
        "one_step",
        (ineq,),
        constants={
            "offset": offset,
            "gain": gain,
            "poincare": constants.poincare,
            "trace": constants.trace,
        },
        context=_context(known, params),
    )


def sequence_bound_rhs(j, offset, gain, u0_seminorm):
    """Closed-form iterated bound for the j-th iterate (j >= 1).

    Uses the exact dyadic exponent sums: term l carries ``offset**(2**(1-l))``
    and ``gain**(2 - 2**(2-l))``; the initial-data term carries
    ``gain**(2 - 2**(1-j))`` and the 2**-j power of the seed seminorm.
    """
    if j < 1:
        raise ValueError(f"iterated bound needs j >= 1, got {j}")
    total = 0.0
    for l in range(1, j + 1):
        total += offset ** (2.0 ** (1 - l)) * gain ** (2.0 - 2.0 ** (2 - l))
    total += gain ** (2.0 - 2.0 ** (1 - j)) * u0_seminorm ** (2.0**-j)
    return total


def check_sequence_bound(trace, constants_pair, inflated_pair, u0_seminorm):
    """Audit the closed-form iterated bound along a seminorm trace.

    ``trace[j-1]`` is the W11 seminorm of iterate j (the seed iterate is
    passed separately as ``u0_seminorm``).
    """
    offset, gain = constants_pair
    offset_i, gain_i = inflated_pair
    inequalities = []
    for idx, lhs in enumerate(trace):
        j = idx + 1
        inequalities.append(
            Inequality(
                f"iterate_{j}",
                float(lhs),
                sequence_bound_rhs(j, offset, gain, u0_seminorm),
                sequence_bound_rhs(j, offset_i, gain_i, u0_seminorm),
            )
        )
    return BoundReport(
        "sequence_bound",
        tuple(inequalities),
        constants={"offset": offset, "gain": gain, "u0_seminorm": u0_seminorm},
    )


def boundedness_threshold(f, known, params, poincare):
    """Data-dependent threshold: smoothing scales with sigma^4 above it give
    uniformly bounded iterates (geometric-sum regime).

    Returns ``(threshold, regime)`` with regime 'large_sigma' when
    ``sigma**4`` exceeds the threshold, else 'small_sigma'.
    """
    f = as_data_image(f, name="f")
    known = as_mask(known, shape=f.shape)
    unknown = ~known
    grad_l2 = _data_gradient_l2(f, known)
    area = float(unknown.sum())
    f_l1 = norm_l1(f, unknown)
    f_semi = seminorm_w11(f, unknown)
    sigma4 = params.sigma**4
    rho_1 = 2.0 * grad_l2 * (1.0 + area / (2.0 * math.pi * sigma4) * poincare * (f_l1 + f_semi))
    rho_2 = 2.0 * grad_l2 * area * poincare / (2.0 * math.pi)
    rho = max(rho_1, rho_2)
    regime = "large_sigma" if sigma4 > rho else "small_sigma"
    return rho, regime


def geometric_bound_rhs(j, rho, sigma, u0_seminorm):
    """Geometric-sum bound for iterate j in the large-smoothing regime.

    Returns +inf when ``rho >= sigma**4`` (the series diverges).
    """
    ratio = rho / sigma**4
    if ratio >= 1.0:
        return math.inf
    return rho / (1.0 - ratio) + ratio**j * u0_seminorm


def check_geometric_bound(trace, f, known, params, poincare):
    """Audit the geometric-sum bound along a seminorm trace (seed first)."""
    rho, regime = boundedness_threshold(f, known, params, poincare)
    rho_i, _ = boundedness_threshold(f, known, params, poincare * INFLATION)
    u0_seminorm = float(trace[0])
    inequalities = []
    for j, lhs in enumerate(trace):
        inequalities.append(
            Inequality(
                f"iterate_{j}",
                float(lhs),
                geometric_bound_rhs(j, rho, params.sigma, u0_seminorm),
                geometric_bound_rhs(j, rho_i, params.sigma, u0_seminorm),
            )
        )
    return BoundReport(
        "geometric_bound",
        tuple(inequalities),
        constants={"threshold": rho, "threshold_inflated": rho_i, "regime": regime},
        context=_context(known, params),
    )


def check_smoothed_gradient_bound(w, known, sigma):
    """Audit ``sup |grad w_smoothed| <= l1(w) / (2 pi sigma^4)`` over unknowns.

    The continuum constant is only valid for moderate smoothing scales (the
    kernel-derivative peak exceeds it for sigma above sqrt(e)), so this is an
    audit with reported slack, not an assertion.
    """
    w = as_image(w, name="w")
    known = as_mask(known, shape=w.shape)
    unknown = ~known
    grad_s = smoothed_gradient(w, known, sigma)
    mag = np.hypot(grad_s[..., 0], grad_s[..., 1])
    lhs = float(mag[unknown].max())
    rhs = norm_l1(w, unknown) / (2.0 * math.pi * sigma**4)
    return BoundReport(
        "smoothed_gradient_bound",
        (Inequality("sup_gradient", lhs, rhs),),
        context={"sigma": sigma},
    )


def audit_iteration(report, f, known, params, constants):
    """All constant-dependent audits along a recorded fixed-point trace.

    Needs a report produced with ``record_norms=True``. Returns a list of
    bound reports: the one-step bound at every recorded step, the iterated
    closed form, and the geometric large-smoothing bound.
    """
    trace = report.seminorm_trace()
    if any(v is None for v in trace):
        raise ValueError("iteration report has no recorded norms")
    offset, gain = one_step_constants(f, known, params, constants)
    offset_i, gain_i = one_step_constants(f, known, params, constants.inflated())

    one_step = []
    for prev, cur in zip(trace[:-1], trace[1:]):
        one_step.append(
            Inequality(
                f"step_{len(one_step)}",
                float(cur),
                offset + gain * math.sqrt(prev),
                offset_i + gain_i * math.sqrt(prev),
            )
        )
    reports = [
        BoundReport(
            "one_step_trace",
            tuple(one_step),
            constants={"offset": offset, "gain": gain},
            context=_context(known, params),
        ),
        check_sequence_bound(trace[1:], (offset, gain), (offset_i, gain_i), trace[0]),
        check_geometric_bound(trace, f, known, params, constants.poincare),
    ]
    return reports
