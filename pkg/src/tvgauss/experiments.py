"""The two benchmark inverse problems and their reference constants.

Denoising: recover the piecewise-constant 0/1/0 signal on [0,1] from 23
pointwise observations. Heat-Robin: recover the time-varying Robin
coefficient rho(t) of a 1-D heat equation from 100 boundary-temperature
readings at x=L.

A grid node landing exactly on a jump takes the left-limit value, a fixed
tie-break so sampled truths are deterministic.
"""

from __future__ import annotations

import numpy as np

from .forward import (
    DenoisingModel,
    HeatRobinModel,
    HeatRobinSetup,
    denoising_model,
    heat_model,
)
from .grid import Field, Grid1D, make_grid

# Denoising reference constants
DENOISING_N = 89
DENOISING_GAMMA = 0.1
DENOISING_D = 0.02
DENOISING_LAMBDA = 500.0
DENOISING_SIGMA = 0.02
DENOISING_OBS_COUNT = 23

# Heat-Robin reference constants. The TV weight and noise level are
# calibrated so the benchmark sampler acceptance rates (~15% pCN, ~40% S-pCN
# at beta=0.02, k=10, N=200) are attainable on this problem; see README.
HEAT_N = 200
HEAT_GAMMA = 0.1
HEAT_D = 0.02
HEAT_LAMBDA = 100.0
HEAT_SIGMA = 0.025
HEAT_OBS_COUNT = 100
HEAT_NX = 101
HEAT_NT = 400
HEAT_SPACE_LEN = 1.0
HEAT_TIME_LEN = 1.0

PROBE_TIMES = (0.2, 0.5, 0.8)


def denoising_truth(grid: Grid1D) -> Field:
    """0 on [0,1/3], 1 on (1/3,2/3], 0 on (2/3,1] (left-limit at the jumps)."""
    t = grid.points
    return Field(grid, np.where(t <= 1.0 / 3.0, 0.0, np.where(t <= 2.0 / 3.0, 1.0, 0.0)))


def robin_truth(grid: Grid1D) -> Field:
    """Stand-in piecewise-constant Robin coefficient: 0.5 / 1.5 / 0.5 with
    jumps at t=1/3 and t=2/3 (the reference figure gives no numeric values)."""
    t = grid.points
    return Field(grid, np.where(t <= 1.0 / 3.0, 0.5, np.where(t <= 2.0 / 3.0, 1.5, 0.5)))


def denoising_locations(count: int = DENOISING_OBS_COUNT, a: float = 0.0, b: float = 1.0) -> np.ndarray:
    return np.linspace(a, b, count)


def build_denoising_model(grid: Grid1D, count: int = DENOISING_OBS_COUNT) -> DenoisingModel:
    return denoising_model(denoising_locations(count, grid.a, grid.b), grid)


def heat_initial_condition(nx: int = HEAT_NX) -> Field:
    """g(x) = x^2 + 1 sampled on the solver's spatial grid."""
    gx = make_grid(nx, 0.0, HEAT_SPACE_LEN)
    return Field(gx, gx.points**2 + 1.0)


def heat_boundary_data(nt: int = HEAT_NT) -> tuple[np.ndarray, np.ndarray]:
    """h0 = t(2t+1) and h1 = 2 + t(2t+2) at the nt+1 solver time levels.

    These are consistent with the exact solution u = x^2 + 2t + 1 for
    rho(t) = t under the outward-normal Robin convention at x=L.
    """
    t = np.linspace(0.0, HEAT_TIME_LEN, nt + 1)
    return t * (2.0 * t + 1.0), 2.0 + t * (2.0 * t + 2.0)


def build_heat_setup(
    nx: int = HEAT_NX,
    nt: int = HEAT_NT,
    obs_count: int = HEAT_OBS_COUNT,
    outward_sign_at_L: bool = True,
) -> HeatRobinSetup:
    h0, h1 = heat_boundary_data(nt)
    return HeatRobinSetup(
        space_len=HEAT_SPACE_LEN,
        time_len=HEAT_TIME_LEN,
        nx=nx,
        nt=nt,
        g=heat_initial_condition(nx),
        h0=h0,
        h1=h1,
        obs_times=np.linspace(0.0, HEAT_TIME_LEN, obs_count),
        outward_sign_at_L=outward_sign_at_L,
    )


def build_heat_model(
    nx: int = HEAT_NX,
    nt: int = HEAT_NT,
    obs_count: int = HEAT_OBS_COUNT,
    outward_sign_at_L: bool = True,
) -> HeatRobinModel:
    return heat_model(build_heat_setup(nx, nt, obs_count, outward_sign_at_L))


def probe_indices(grid: Grid1D, times=PROBE_TIMES) -> tuple[int, ...]:
    """Nearest grid node for each probe time."""
    return tuple(int(round((p - grid.a) / grid.h)) for p in times)


def tv_prior_draw(grid: Grid1D, lam: float, rng: np.random.Generator) -> Field:
    """A draw with the finite-dimensional TV prior's increment structure:
    iid Laplace(1/lam) increments accumulated from level zero.

    Random-walk chains on the TV posterior must start from a state with
    increments at this natural scale; a constant start sits at the global TV
    minimum where the rectified |.| terms reject every proposal.
    """
    increments = rng.laplace(0.0, 1.0 / lam, grid.n - 1)
    return Field(grid, np.concatenate(([0.0], np.cumsum(increments))))
