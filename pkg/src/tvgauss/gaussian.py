"""The Gaussian reference measure: squared-exponential covariance, Cholesky
factorization with a jitter ladder, prior sampling, the Cameron-Martin norm,
and exact Gaussian-process regression used as an analytic oracle.

Normal variates come from the caller's ``numpy.random.Generator`` (PCG64 +
ziggurat in this build), so every draw is reproducible from a 64-bit seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .grid import Field, Grid1D, ObservationSet

# Jitter escalation: try 0, then JITTER_FLOOR*scale escalating by 10x up to
# JITTER_CEIL*scale, where scale is the largest diagonal entry (= gamma for
# the squared-exponential kernel).
JITTER_FLOOR = 1e-12
JITTER_CEIL = 1e-6


@dataclass(frozen=True)
class SqExpKernel:
    """Squared-exponential covariance ``gamma * exp(-((t1-t2)/d)^2 / 2)``."""

    gamma: float
    d: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not (np.isfinite(self.d) and self.d > 0):
            raise ValueError(f"correlation length d must be positive, got {self.d}")

    def __call__(self, t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
        diff = (np.asarray(t1) - np.asarray(t2)) / self.d
        return self.gamma * np.exp(-0.5 * diff * diff)


@dataclass(frozen=True)
class CovarianceOperator:
    """Dense SPD covariance matrix over a grid; ``jitter`` is what was
    actually added to the diagonal to make Cholesky succeed (0 until
    :func:`factor` has run)."""

    grid: Grid1D
    matrix: np.ndarray
    jitter: float = 0.0

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=np.float64)
        n = self.grid.n
        if mat.shape != (n, n):
            raise ValueError(f"covariance must be {n}x{n}, got {mat.shape}")
        scale = max(np.abs(mat).max(), 1.0)
        if np.abs(mat - mat.T).max() > 1e-12 * scale:
            raise ValueError("covariance matrix is not symmetric")
        if self.jitter < 0:
            raise ValueError("jitter must be nonnegative")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True)
class CholeskyFactor:
    """Lower-triangular ``L`` with ``L @ L.T = matrix + jitter*I``."""

    grid: Grid1D
    lower: np.ndarray
    jitter: float

    def __post_init__(self) -> None:
        low = np.asarray(self.lower, dtype=np.float64)
        n = self.grid.n
        if low.shape != (n, n):
            raise ValueError(f"factor must be {n}x{n}, got {low.shape}")
        if not np.all(np.diag(low) > 0):
            raise ValueError("Cholesky factor must have positive diagonal")
        low = low.copy()
        low.setflags(write=False)
        object.__setattr__(self, "lower", low)


def build_covariance(kernel: SqExpKernel, grid: Grid1D) -> CovarianceOperator:
    """Evaluate the kernel on the grid; the result is exactly symmetric."""
    t = grid.points
    upper = np.triu(kernel(t[None, :], t[:, None]))
    mat = upper + np.triu(upper, 1).T
    return CovarianceOperator(grid=grid, matrix=mat, jitter=0.0)


def factor(cov: CovarianceOperator) -> CholeskyFactor:
    """Cholesky-factor ``cov.matrix + jitter*I``, escalating jitter as needed.

    The jitter actually used is recorded on the returned factor. Raises
    ``np.linalg.LinAlgError`` if the ceiling jitter still fails, which signals
    an ill-posed kernel/grid combination.
    """
    scale = float(np.diag(cov.matrix).max())
    jitters = [0.0]
    j = JITTER_FLOOR * scale
    while j <= JITTER_CEIL * scale * (1 + 1e-9):
        jitters.append(j)
        j *= 10.0
    n = cov.grid.n
    eye = np.eye(n)
    for jit in jitters:
        try:
            lower = np.linalg.cholesky(cov.matrix + jit * eye)
        except np.linalg.LinAlgError:
            continue
        return CholeskyFactor(grid=cov.grid, lower=lower, jitter=jit)
    raise np.linalg.LinAlgError(
        f"covariance not positive definite even with jitter {jitters[-1]:.3g}; "
        "kernel/grid combination is ill-posed"
    )


def sample_prior(fac: CholeskyFactor, rng: np.random.Generator) -> Field:
    """One draw ``L @ z`` with ``z`` i.i.d. standard normal from ``rng``."""
    z = rng.standard_normal(fac.grid.n)
    return Field(fac.grid, fac.lower @ z)


def cameron_martin_norm_sq(fac: CholeskyFactor, u: Field) -> float:
    """Squared Cameron-Martin norm ``||L^{-1} u||^2`` via forward substitution."""
    if u.grid != fac.grid:
        raise ValueError("field grid does not match factor grid")
    z = scipy.linalg.solve_triangular(fac.lower, u.values, lower=True)
    return float(z @ z)


def gp_posterior_exact(
    kernel: SqExpKernel, grid: Grid1D, obs: ObservationSet
) -> tuple[Field, Field]:
    """Exact GP regression with point observations and i.i.d. Gaussian noise.

    Returns the posterior mean and pointwise posterior standard deviation,
    both evaluated at every grid node. With no observations this is the
    prior: zero mean, sd ``sqrt(gamma)``.
    """
    t = grid.points
    if obs.m > 0 and not (
        obs.locations[0] >= grid.a and obs.locations[-1] <= grid.b
    ):
        raise ValueError("observation locations outside the grid domain")
    if obs.m == 0:
        mean = np.zeros(grid.n)
        sd = np.full(grid.n, np.sqrt(kernel.gamma))
        return Field(grid, mean), Field(grid, sd)
    locs = obs.locations
    gram = kernel(locs[None, :], locs[:, None]) + obs.noise_sd**2 * np.eye(obs.m)
    try:
        cho = scipy.linalg.cho_factor(gram, lower=True)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            "observation gram matrix plus noise is not positive definite"
        ) from exc
    cross = kernel(t[:, None], locs[None, :])  # n x m
    mean = cross @ scipy.linalg.cho_solve(cho, obs.y)
    var = kernel.gamma - np.sum(cross * scipy.linalg.cho_solve(cho, cross.T).T, axis=1)
    # roundoff can push tiny variances below zero
    sd = np.sqrt(np.maximum(var, 0.0))
    return Field(grid, mean), Field(grid, sd)
