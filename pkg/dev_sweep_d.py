"""Sweep the Robin reference-measure correlation length to match reported rates."""
import sys
import time

import numpy as np

from tvgauss import (
    Field,
    HeatRobinSetup,
    PosteriorProblem,
    SamplerConfig,
    SqExpKernel,
    TVTerm,
    build_covariance,
    factor,
    generate_data,
    heat_model,
    make_grid,
    run_chain,
)

n_run = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000
burn = int(sys.argv[2]) if len(sys.argv) > 2 else 20_000

L = T = 1.0
gx = make_grid(101, 0.0, L)
g = Field(gx, gx.points**2 + 1.0)
tl = np.linspace(0.0, T, 401)
h0 = tl * (2 * tl + 1)
h1 = 2 + tl * (2 * tl + 2)
obs_times = np.linspace(0.0, T, 100)
rho_grid = make_grid(200, 0.0, T)
t = rho_grid.points
truth = Field(rho_grid, np.where(t <= 1 / 3, 0.5, np.where(t <= 2 / 3, 1.5, 0.5)))
model = heat_model(HeatRobinSetup(L, T, 101, 400, g, h0, h1, obs_times))
obs = generate_data(model, truth, 0.01, np.random.default_rng(2024))

for d in (0.05, 0.08, 0.12):
    fac = factor(build_covariance(SqExpKernel(0.1, d), rho_grid))
    prob = PosteriorProblem(model=model, obs=obs, tv=TVTerm(300.0), factor=fac)
    init = Field(rho_grid, fac.lower @ np.random.default_rng(999).standard_normal(200))
    line = f"d={d}: "
    for kind in ("pcn", "spcn"):
        cfg = SamplerConfig(n_samples=n_run, beta=0.02, k=10, burn_in=burn, thin=50, seed=11)
        t0 = time.time()
        out = run_chain(kind, init, cfg, prob)
        err = np.abs(out.mean.values - truth.values).mean()
        line += (f"{kind}: outer={out.stats.outer_accept_rate:.3f} "
                 f"inner={out.stats.inner_accept_rate:.3f} err={err:.3f} "
                 f"({time.time()-t0:.0f}s)  ")
    print(line)
