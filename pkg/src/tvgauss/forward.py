"""Observation operators: point-observation denoising and the heat-conduction
boundary-trace map with a time-varying Robin coefficient, plus synthetic data
generation.

The heat solver is Crank-Nicolson with the Robin conditions imposed through
second-order ghost-node elimination; each step solves one tridiagonal system
by the Thomas algorithm. The time loop is JIT-compiled because MCMC on the
Robin problem needs hundreds of thousands of forward solves.
"""

from __future__ import annotations

import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

from .grid import Field, Grid1D, ObservationSet


class HeatSolverError(RuntimeError):
    """Raised when the time stepper produces non-finite values."""

    def __init__(self, step: int, time: float):
        self.step = step
        self.time = time
        super().__init__(
            f"heat solver produced non-finite values at time step {step} (t={time:.6g}); "
            "configuration is unstable"
        )


class ForwardModel(ABC):
    """Deterministic map from a field to a prediction vector of length ``m``."""

    @property
    @abstractmethod
    def m(self) -> int: ...

    @property
    @abstractmethod
    def obs_coords(self) -> np.ndarray:
        """Coordinates (locations or times) the predictions refer to."""

    @abstractmethod
    def predictor(self, grid: Grid1D) -> Callable[[np.ndarray], np.ndarray]:
        """Fast value-array path: validate the grid once, then map values to
        predictions without rebuilding Field objects (used by the samplers)."""

    def apply(self, u: Field) -> np.ndarray:
        return self.predictor(u.grid)(u.values)


class DenoisingModel(ForwardModel):
    """Pointwise evaluation of the field at fixed locations (linear interp)."""

    def __init__(self, locations: np.ndarray, grid: Grid1D):
        locs = np.asarray(locations, dtype=np.float64)
        if locs.ndim != 1:
            raise ValueError("locations must be a 1-D vector")
        if locs.size > 1 and not np.all(np.diff(locs) > 0):
            raise ValueError("locations must be strictly increasing")
        if locs.size and (locs[0] < grid.a or locs[-1] > grid.b):
            raise ValueError("locations outside the grid domain")
        self.grid = grid
        self._locs = locs
        self._points = grid.points

    @property
    def m(self) -> int:
        return self._locs.size

    @property
    def obs_coords(self) -> np.ndarray:
        return self._locs

    def predictor(self, grid: Grid1D) -> Callable[[np.ndarray], np.ndarray]:
        if grid != self.grid:
            raise ValueError("field grid does not match the model grid")
        locs, points = self._locs, self._points
        return lambda values: np.interp(locs, points, values)


def denoising_model(obs_locations: np.ndarray, grid: Grid1D) -> DenoisingModel:
    return DenoisingModel(obs_locations, grid)


@dataclass(frozen=True)
class HeatRobinSetup:
    """Problem data for ``u_t = u_xx`` on ``[0,L] x [0,T]`` with Robin boundaries.

    Boundary conditions with coefficient rho(t):
      at x=0:  -u_x(0,t) + rho(t) u(0,t) = h0(t)
      at x=L:  +u_x(L,t) + rho(t) u(L,t) = h1(t)   (outward-normal form)
    With ``outward_sign_at_L=False`` the x=L condition instead uses
    ``-u_x(L,t) + rho(t) u(L,t) = h1(t)``.

    ``h0`` and ``h1`` are tabulated at the nt+1 solver time levels.
    """

    space_len: float
    time_len: float
    nx: int
    nt: int
    g: Field
    h0: np.ndarray
    h1: np.ndarray
    obs_times: np.ndarray
    outward_sign_at_L: bool = True

    def __post_init__(self) -> None:
        if self.nx < 3:
            raise ValueError(f"nx must be >= 3, got {self.nx}")
        if self.nt < 2:
            raise ValueError(f"nt must be >= 2, got {self.nt}")
        if not (self.space_len > 0 and self.time_len > 0):
            raise ValueError("space_len and time_len must be positive")
        if self.g.grid.a != 0.0 or self.g.grid.b != self.space_len:
            raise ValueError("initial condition g must span [0, space_len]")
        for name, arr in (("h0", self.h0), ("h1", self.h1)):
            a = np.asarray(arr, dtype=np.float64)
            if a.shape != (self.nt + 1,):
                raise ValueError(f"{name} must have nt+1={self.nt + 1} entries")
            if not np.all(np.isfinite(a)):
                raise ValueError(f"{name} must be finite")
            a = a.copy()
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        times = np.asarray(self.obs_times, dtype=np.float64)
        if times.ndim != 1 or times.size == 0:
            raise ValueError("obs_times must be a nonempty 1-D vector")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("obs_times must be strictly increasing")
        if times[0] < 0 or times[-1] > self.time_len:
            raise ValueError("obs_times outside [0, time_len]")
        times = times.copy()
        times.setflags(write=False)
        object.__setattr__(self, "obs_times", times)


@njit(cache=True)
def _cn_robin_trace(u0, rho_half, h0, h1, dx, dt, sign):  # pragma: no cover - jit
    """Crank-Nicolson time stepping; returns (boundary trace at x=L, fail step).

    fail step is -1 on success, otherwise the 1-based index of the first step
    at which the solution went non-finite.
    """
    nx = u0.shape[0]
    nt = rho_half.shape[0]
    r = dt / (dx * dx)
    half = 0.5 * r
    src = dt / dx
    u = u0.copy()
    trace = np.empty(nt + 1)
    trace[0] = u[nx - 1]
    rhs = np.empty(nx)
    cp = np.empty(nx - 1)
    dp = np.empty(nx)
    for k in range(nt):
        rho = rho_half[k]
        b0 = 1.0 + r * (1.0 + dx * rho)
        bn = 1.0 + r * (1.0 + sign * dx * rho)
        rhs[0] = (2.0 - b0) * u[0] + r * u[1] + src * (h0[k] + h0[k + 1])
        for i in range(1, nx - 1):
            rhs[i] = half * u[i - 1] + (1.0 - r) * u[i] + half * u[i + 1]
        rhs[nx - 1] = (
            r * u[nx - 2] + (2.0 - bn) * u[nx - 1] + sign * src * (h1[k] + h1[k + 1])
        )
        # Thomas sweep; diag = [b0, 1+r, ..., 1+r, bn], sup = [-r, -half, ...],
        # sub = [..., -half, -r]
        cp[0] = -r / b0
        dp[0] = rhs[0] / b0
        for i in range(1, nx - 1):
            denom = (1.0 + r) + half * cp[i - 1]
            cp[i] = -half / denom
            dp[i] = (rhs[i] + half * dp[i - 1]) / denom
        denom = bn + r * cp[nx - 2]
        dp[nx - 1] = (rhs[nx - 1] + r * dp[nx - 2]) / denom
        u[nx - 1] = dp[nx - 1]
        for i in range(nx - 2, -1, -1):
            u[i] = dp[i] - cp[i] * u[i + 1]
        trace[k + 1] = u[nx - 1]
        finite = True
        for i in range(nx):
            if not np.isfinite(u[i]):
                finite = False
                break
        if not finite:
            return trace, k + 1
    return trace, -1


class HeatRobinModel(ForwardModel):
    """Boundary-trace map: Robin coefficient rho(t) -> u(L, obs_times).

    rho may live on any grid spanning [0, time_len]; it is linearly
    interpolated to the half-step times used in the Crank-Nicolson boundary
    rows, which keeps the scheme second order for time-varying coefficients.
    """

    def __init__(self, setup: HeatRobinSetup):
        self.setup = setup
        self._dx = setup.space_len / (setup.nx - 1)
        self._dt = setup.time_len / setup.nt
        x = np.linspace(0.0, setup.space_len, setup.nx)
        self._u0 = np.interp(x, setup.g.grid.points, setup.g.values)
        self._t_levels = np.linspace(0.0, setup.time_len, setup.nt + 1)
        self._t_half = self._t_levels[:-1] + 0.5 * self._dt
        self._sign = 1.0 if setup.outward_sign_at_L else -1.0

    @property
    def m(self) -> int:
        return self.setup.obs_times.size

    @property
    def obs_coords(self) -> np.ndarray:
        return self.setup.obs_times

    def trace(self, rho: Field) -> np.ndarray:
        """Full boundary trace u(L, t) at the nt+1 solver time levels."""
        return self._trace_from(rho.grid.points, rho.values)

    def _trace_from(self, rho_points: np.ndarray, rho_values: np.ndarray) -> np.ndarray:
        if float(rho_values.min()) < 0.0:
            warnings.warn(
                "Robin coefficient has negative values; problem may be ill-posed",
                RuntimeWarning,
                stacklevel=3,
            )
        rho_half = np.interp(self._t_half, rho_points, rho_values)
        tr, fail = _cn_robin_trace(
            self._u0,
            rho_half,
            self.setup.h0,
            self.setup.h1,
            self._dx,
            self._dt,
            self._sign,
        )
        if fail >= 0:
            raise HeatSolverError(step=fail, time=fail * self._dt)
        return tr

    def predictor(self, grid: Grid1D) -> Callable[[np.ndarray], np.ndarray]:
        if grid.a != 0.0 or grid.b != self.setup.time_len:
            raise ValueError("Robin coefficient grid must span [0, time_len]")
        points = grid.points
        obs_times = self.setup.obs_times
        t_levels = self._t_levels

        def predict(values: np.ndarray) -> np.ndarray:
            return np.interp(obs_times, t_levels, self._trace_from(points, values))

        return predict


def heat_model(setup: HeatRobinSetup) -> HeatRobinModel:
    return HeatRobinModel(setup)


def generate_data(
    model: ForwardModel,
    truth: Field,
    noise_sd: float,
    rng: np.random.Generator,
) -> ObservationSet:
    """Clean prediction at the truth plus i.i.d. N(0, noise_sd^2) noise."""
    if noise_sd <= 0:
        raise ValueError(f"noise_sd must be positive, got {noise_sd}")
    clean = model.apply(truth)
    y = clean + noise_sd * rng.standard_normal(model.m)
    return ObservationSet(model.obs_coords, y, noise_sd)
