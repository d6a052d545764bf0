"""Refined sweep near the predicted operating point."""
import numpy as np
from tvgauss import (Field, HeatRobinSetup, PosteriorProblem, SamplerConfig, SqExpKernel,
                     TVTerm, build_covariance, factor, generate_data, heat_model,
                     make_grid, run_chain)
from tvgauss.diagnostics import ess

L = T = 1.0
gx = make_grid(101, 0.0, L)
g = Field(gx, gx.points**2 + 1.0)
tl = np.linspace(0.0, T, 401)
h0 = tl * (2 * tl + 1)
h1 = 2 + tl * (2 * tl + 2)
obs_times = np.linspace(0.0, T, 100)
rho_grid = make_grid(200, 0.0, T)
t = rho_grid.points
truth = Field(rho_grid, np.where(t <= 1/3, 0.5, np.where(t <= 2/3, 1.5, 0.5)))
model = heat_model(HeatRobinSetup(L, T, 101, 400, g, h0, h1, obs_times))
probe = tuple(int(round(p * 199)) for p in (0.2, 0.5, 0.8))

for d in (0.05, 0.06):
    for sd in (0.04, 0.05, 0.07):
        obs = generate_data(model, truth, sd, np.random.default_rng(2024))
        fac = factor(build_covariance(SqExpKernel(0.1, d), rho_grid))
        prob = PosteriorProblem(model=model, obs=obs, tv=TVTerm(300.0), factor=fac)
        init = Field(rho_grid, fac.lower @ np.random.default_rng(999).standard_normal(200))
        line = f"d={d} sd={sd}: "
        for kind in ("pcn", "spcn"):
            cfg = SamplerConfig(n_samples=20_000, beta=0.02, k=10, burn_in=20_000, thin=50, seed=11)
            out = run_chain(kind, init, cfg, prob, probe_indices=probe)
            esses = [ess(out.probe_series[:, j]) for j in range(3)]
            err = np.abs(out.mean.values - truth.values).mean()
            line += (f"{kind}: o={out.stats.outer_accept_rate:.3f} i={out.stats.inner_accept_rate:.3f} "
                     f"ess={np.mean(esses):.0f} err={err:.3f}  ")
        print(line, flush=True)
