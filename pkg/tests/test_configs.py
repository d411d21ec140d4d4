import math

import pytest

from eedpaint import EedParams, FixedPointConfig, SolverConfig, SparsifyConfig


@pytest.mark.parametrize("sigma", [0.0, -0.5, math.inf, math.nan])
def test_eed_params_reject_bad_sigma(sigma):
    with pytest.raises(ValueError):
        EedParams(sigma=sigma)


@pytest.mark.parametrize("lam", [0.0, -1.0, math.inf])
def test_eed_params_reject_bad_lambda(lam):
    with pytest.raises(ValueError):
        EedParams(lam=lam)


def test_eed_params_defaults():
    params = EedParams()
    assert params.sigma == 0.8
    assert params.lam == 1.0


@pytest.mark.parametrize("tol", [0.0, 1.0, 2.0, -1e-3])
def test_solver_config_rejects_bad_tolerance(tol):
    with pytest.raises(ValueError):
        SolverConfig(cg_tol=tol)


def test_solver_config_rejects_bad_iteration_cap():
    with pytest.raises(ValueError):
        SolverConfig(cg_max_iter=0)


def test_solver_config_rejects_unknown_preconditioner():
    with pytest.raises(ValueError):
        SolverConfig(preconditioner="ilu")


@pytest.mark.parametrize("j_tol", [0.0, -1e-8, math.inf])
def test_fixed_point_config_rejects_bad_j_tol(j_tol):
    with pytest.raises(ValueError):
        FixedPointConfig(j_tol=j_tol)


def test_fixed_point_config_rejects_bad_outer_cap():
    with pytest.raises(ValueError):
        FixedPointConfig(max_outer=0)


def test_sparsify_config_defaults_are_consistent():
    cfg = SparsifyConfig()
    assert 0 < cfg.return_fraction < cfg.candidate_fraction < 1
    assert cfg.target_density == 0.10
