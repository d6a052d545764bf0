import math

import numpy as np
import pytest

from tvgauss import (
    Field,
    ObservationSet,
    SqExpKernel,
    build_covariance,
    cameron_martin_norm_sq,
    factor,
    gp_posterior_exact,
    make_grid,
    sample_prior,
)
from tvgauss.gaussian import CovarianceOperator

GAMMA = 0.1


def test_kernel_validation():
    with pytest.raises(ValueError):
        SqExpKernel(0.0, 0.1)
    with pytest.raises(ValueError):
        SqExpKernel(0.1, -1.0)


def test_covariance_diagonal_is_gamma():
    cov = build_covariance(SqExpKernel(GAMMA, 0.02), make_grid(89, 0.0, 1.0))
    assert np.all(np.diag(cov.matrix) == GAMMA)


def test_covariance_at_distance_d():
    # two-point grid with separation exactly d=1
    cov = build_covariance(SqExpKernel(GAMMA, 1.0), make_grid(2, 0.0, 1.0))
    assert cov.matrix[0, 1] == pytest.approx(GAMMA * math.exp(-0.5), rel=1e-15)
    assert cov.matrix[0, 1] == pytest.approx(0.060653065971263, rel=1e-12)


def test_covariance_decay_far_apart():
    cov = build_covariance(SqExpKernel(GAMMA, 0.02), make_grid(6, 0.0, 1.0))
    assert cov.matrix[0, 5] <= GAMMA * math.exp(-50.0)


def test_covariance_exactly_symmetric():
    cov = build_covariance(SqExpKernel(GAMMA, 0.02), make_grid(140, 0.0, 1.0))
    assert np.array_equal(cov.matrix, cov.matrix.T)


def test_factor_identity():
    grid = make_grid(4, 0.0, 1.0)
    fac = factor(CovarianceOperator(grid=grid, matrix=np.eye(4)))
    assert np.array_equal(fac.lower, np.eye(4))
    assert fac.jitter == 0.0


def test_factor_diagonal_gives_sqrt():
    grid = make_grid(2, 0.0, 1.0)
    fac = factor(CovarianceOperator(grid=grid, matrix=GAMMA * np.eye(2)))
    assert np.allclose(np.diag(fac.lower), math.sqrt(GAMMA), rtol=0, atol=1e-16)


def test_factor_reconstruction_accuracy():
    grid = make_grid(100, 0.0, 1.0)
    cov = build_covariance(SqExpKernel(GAMMA, 0.02), grid)
    fac = factor(cov)
    recon = fac.lower @ fac.lower.T
    target = cov.matrix + fac.jitter * np.eye(100)
    assert np.max(np.abs(recon - target)) < 1e-10 * GAMMA


def test_factor_jitter_stays_small_on_paper_grids():
    for n in (89, 177, 200, 353):
        cov = build_covariance(SqExpKernel(GAMMA, 0.02), make_grid(n, 0.0, 1.0))
        fac = factor(cov)
        assert fac.jitter <= 1e-6 * GAMMA


def test_factor_rejects_indefinite_matrix():
    grid = make_grid(2, 0.0, 1.0)
    bad = np.array([[1.0, 2.0], [2.0, 1.0]])  # eigenvalues 3, -1
    with pytest.raises(np.linalg.LinAlgError):
        factor(CovarianceOperator(grid=grid, matrix=bad))


class _ZeroDrawRng:
    def standard_normal(self, n):
        return np.zeros(n)


def test_sample_prior_zero_draw_gives_zero_field():
    fac = factor(build_covariance(SqExpKernel(GAMMA, 0.1), make_grid(12, 0.0, 1.0)))
    f = sample_prior(fac, _ZeroDrawRng())
    assert np.all(f.values == 0.0)


def test_sample_prior_deterministic_given_seed():
    fac = factor(build_covariance(SqExpKernel(GAMMA, 0.1), make_grid(12, 0.0, 1.0)))
    a = sample_prior(fac, np.random.default_rng(1234))
    b = sample_prior(fac, np.random.default_rng(1234))
    assert np.array_equal(a.values, b.values)


def test_sample_prior_matches_covariance():
    n, n_draws = 25, 100_000
    grid = make_grid(n, 0.0, 1.0)
    cov = build_covariance(SqExpKernel(GAMMA, 0.1), grid)
    fac = factor(cov)
    z = np.random.default_rng(77).standard_normal((n, n_draws))
    draws = fac.lower @ z
    emp_var = draws.var(axis=1)
    assert np.all(np.abs(emp_var - np.diag(cov.matrix)) < 0.05 * np.diag(cov.matrix))
    # a fixed off-diagonal pair within 5 Monte Carlo standard errors
    i, j = 3, 11
    emp_cov = np.mean(draws[i] * draws[j])
    cij, cii, cjj = cov.matrix[i, j], cov.matrix[i, i], cov.matrix[j, j]
    mc_se = math.sqrt((cii * cjj + cij * cij) / n_draws)
    assert abs(emp_cov - cij) < 5 * mc_se


def test_cameron_martin_zero_field():
    fac = factor(build_covariance(SqExpKernel(GAMMA, 0.1), make_grid(10, 0.0, 1.0)))
    assert cameron_martin_norm_sq(fac, Field(fac.grid, np.zeros(10))) == 0.0


def test_cameron_martin_first_column_of_L():
    fac = factor(build_covariance(SqExpKernel(GAMMA, 0.1), make_grid(10, 0.0, 1.0)))
    u = Field(fac.grid, fac.lower @ np.eye(10)[:, 0])
    assert cameron_martin_norm_sq(fac, u) == pytest.approx(1.0, rel=1e-12)


def test_cameron_martin_matches_dense_solve():
    grid = make_grid(100, 0.0, 1.0)
    cov = build_covariance(SqExpKernel(GAMMA, 0.02), grid)
    fac = factor(cov)
    rng = np.random.default_rng(7)
    u = Field(grid, fac.lower @ rng.standard_normal(100))
    ours = cameron_martin_norm_sq(fac, u)
    dense = float(
        u.values @ np.linalg.solve(cov.matrix + fac.jitter * np.eye(100), u.values)
    )
    assert ours == pytest.approx(dense, rel=1e-8)


def test_cameron_martin_positive_definite():
    fac = factor(build_covariance(SqExpKernel(GAMMA, 0.1), make_grid(15, 0.0, 1.0)))
    rng = np.random.default_rng(21)
    for _ in range(50):
        u = rng.standard_normal(15)
        val = cameron_martin_norm_sq(fac, Field(fac.grid, u))
        assert val > 0.0


def test_cameron_martin_rejects_grid_mismatch():
    fac = factor(build_covariance(SqExpKernel(GAMMA, 0.1), make_grid(10, 0.0, 1.0)))
    other = Field(make_grid(11, 0.0, 1.0), np.zeros(11))
    with pytest.raises(ValueError):
        cameron_martin_norm_sq(fac, other)


def test_gp_zero_data_gives_zero_mean():
    grid = make_grid(50, 0.0, 1.0)
    obs = ObservationSet(np.linspace(0, 1, 9), np.zeros(9), 0.02)
    mean, _ = gp_posterior_exact(SqExpKernel(GAMMA, 0.08), grid, obs)
    assert np.all(mean.values == 0.0)


def test_gp_single_observation_closed_form():
    grid = make_grid(101, 0.0, 1.0)
    obs = ObservationSet(np.array([0.5]), np.array([1.0]), 0.02)
    mean, _ = gp_posterior_exact(SqExpKernel(GAMMA, 0.1), grid, obs)
    # gamma / (gamma + sigma^2) = 0.1 / 0.1004
    assert mean.values[50] == pytest.approx(0.1 / 0.1004, rel=1e-12)


def test_gp_posterior_sd_bounded_by_prior_sd():
    grid = make_grid(80, 0.0, 1.0)
    rng = np.random.default_rng(6)
    obs = ObservationSet(np.linspace(0.1, 0.9, 7), rng.standard_normal(7), 0.05)
    _, sd = gp_posterior_exact(SqExpKernel(GAMMA, 0.08), grid, obs)
    assert np.all(sd.values <= math.sqrt(GAMMA) + 1e-12)


def test_gp_mean_interpolates_as_noise_vanishes():
    grid = make_grid(353, 0.0, 1.0)
    locs = np.linspace(0, 1, 23)
    y = np.sin(2 * np.pi * locs)
    obs = ObservationSet(locs, y, 1e-6)
    mean, _ = gp_posterior_exact(SqExpKernel(GAMMA, 0.04), grid, obs)
    at_obs = np.interp(locs, grid.points, mean.values)
    assert np.max(np.abs(at_obs - y)) < 1e-3


def test_gp_mean_shrinks_when_noise_inflated():
    # 100x noisier data pulls the posterior mean toward the zero prior mean
    # at every observation location (checked for the benchmark kernel d=0.08)
    from tvgauss import denoising_model, generate_data
    from tvgauss.experiments import denoising_locations, denoising_truth

    grid = make_grid(89, 0.0, 1.0)
    locs = denoising_locations()
    obs = generate_data(
        denoising_model(locs, grid), denoising_truth(grid), 0.02,
        np.random.default_rng(101),
    )
    kernel = SqExpKernel(GAMMA, 0.08)
    mean_small, _ = gp_posterior_exact(kernel, grid, obs)
    obs_big = ObservationSet(obs.locations, obs.y, obs.noise_sd * 100)
    mean_big, _ = gp_posterior_exact(kernel, grid, obs_big)
    at_small = np.abs(np.interp(locs, grid.points, mean_small.values))
    at_big = np.abs(np.interp(locs, grid.points, mean_big.values))
    assert np.all(at_big < at_small)


def test_gp_empty_observations_returns_prior():
    grid = make_grid(20, 0.0, 1.0)
    obs = ObservationSet(np.array([]), np.array([]), 0.1)
    mean, sd = gp_posterior_exact(SqExpKernel(GAMMA, 0.1), grid, obs)
    assert np.all(mean.values == 0.0)
    assert np.allclose(sd.values, math.sqrt(GAMMA))
