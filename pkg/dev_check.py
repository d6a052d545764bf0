"""Dev scratch checks (not part of the package)."""
import time

import numpy as np

from tvgauss import (
    Field,
    HeatRobinSetup,
    ObservationSet,
    SqExpKernel,
    build_covariance,
    cameron_martin_norm_sq,
    factor,
    gp_posterior_exact,
    heat_model,
    make_grid,
)


def manufactured_error(nx, nt, n_obs=100):
    """u = x^2 + 2t + 1, rho(t) = t, outward-normal form; trace u(1,t) = 2+2t."""
    T = 1.0
    gx = make_grid(nx, 0.0, 1.0)
    g = Field(gx, gx.points**2 + 1.0)
    tl = np.linspace(0.0, T, nt + 1)
    h0 = tl * (2 * tl + 1)
    h1 = 2 + tl * (2 * tl + 2)
    obs_times = np.linspace(0.0, T, n_obs)
    setup = HeatRobinSetup(1.0, T, nx, nt, g, h0, h1, obs_times)
    model = heat_model(setup)
    rho_grid = make_grid(200, 0.0, T)
    rho = Field(rho_grid, rho_grid.points)
    pred = model.apply(rho)
    exact = 2.0 + 2.0 * obs_times
    return np.max(np.abs(pred - exact))


t0 = time.time()
e1 = manufactured_error(101, 400)
e2 = manufactured_error(201, 800)
e3 = manufactured_error(401, 1600)
print(f"manufactured errors: {e1:.3e} {e2:.3e} {e3:.3e}")
print(f"orders: {np.log2(e1 / e2):.3f} {np.log2(e2 / e3):.3f}")
print(f"heat check took {time.time() - t0:.1f}s (includes jit compile)")

# timing of one forward solve at full and reduced resolution
for nx, nt in [(101, 400), (61, 150)]:
    T = 1.0
    gx = make_grid(201, 0.0, 1.0)
    g = Field(gx, gx.points**2 + 1.0)
    tl = np.linspace(0.0, T, nt + 1)
    setup = HeatRobinSetup(1.0, T, nx, nt, g, tl * (2 * tl + 1), 2 + tl * (2 * tl + 2),
                           np.linspace(0, T, 100))
    model = heat_model(setup)
    rho_grid = make_grid(200, 0.0, T)
    rho_vals = rho_grid.points.copy()
    predict = model.predictor(rho_grid)
    predict(rho_vals)
    t0 = time.time()
    reps = 2000
    for _ in range(reps):
        predict(rho_vals)
    print(f"forward eval nx={nx} nt={nt}: {(time.time() - t0) / reps * 1e6:.0f} us")

# jitter ladder at the paper's hardest kernel/grid combination
for n in (89, 177, 353):
    grid = make_grid(n, 0.0, 1.0)
    cov = build_covariance(SqExpKernel(0.1, 0.02), grid)
    fac = factor(cov)
    rec = np.max(np.abs(fac.lower @ fac.lower.T - (cov.matrix + fac.jitter * np.eye(n))))
    print(f"N={n}: jitter={fac.jitter:.3e} ({fac.jitter / 0.1:.1e} * gamma), recon={rec:.2e}")

# N=200 (robin inference grid)
grid = make_grid(200, 0.0, 1.0)
fac = factor(build_covariance(SqExpKernel(0.1, 0.02), grid))
print(f"N=200: jitter={fac.jitter:.3e}")

# CM norm vs dense solve, different conditionings
for n, d in [(40, 0.05), (60, 0.1), (100, 0.02)]:
    grid = make_grid(n, 0.0, 1.0)
    cov = build_covariance(SqExpKernel(0.1, d), grid)
    fac = factor(cov)
    rng = np.random.default_rng(7)
    u = Field(grid, fac.lower @ rng.standard_normal(n))
    ours = cameron_martin_norm_sq(fac, u)
    dense = float(u.values @ np.linalg.solve(cov.matrix + fac.jitter * np.eye(n), u.values))
    print(f"n={n} d={d}: CM={ours:.6e} dense={dense:.6e} rel={abs(ours - dense) / dense:.2e}")

# GP single-obs closed form
grid = make_grid(101, 0.0, 1.0)
obs = ObservationSet(np.array([0.5]), np.array([1.0]), 0.02)
mean, sd = gp_posterior_exact(SqExpKernel(0.1, 0.1), grid, obs)
print(f"gp mean(0.5)={mean.values[50]:.6f} expect {0.1 / 0.1004:.6f}")
print(f"gp sd max={sd.values.max():.6f} <= sqrt(gamma)={np.sqrt(0.1):.6f}")

# GP interpolation as sigma -> 0
locs = np.linspace(0, 1, 23)
y = np.sin(2 * np.pi * locs)
obs = ObservationSet(locs, y, 1e-6)
mean, sd = gp_posterior_exact(SqExpKernel(0.1, 0.04), grid, obs)
at_obs = np.interp(locs, grid.points, mean.values)
print(f"gp interp max err at obs (sigma=1e-6, d=0.04): {np.max(np.abs(at_obs - y)):.2e}")
