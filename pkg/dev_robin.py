"""Dev check: Robin-coefficient experiment acceptance rates vs the paper."""
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
from tvgauss.diagnostics import ess

n_run = int(sys.argv[1]) if len(sys.argv) > 1 else 30_000
burn = int(sys.argv[2]) if len(sys.argv) > 2 else 30_000

L = T = 1.0
nx_data, nt_data = 101, 400
nx_mcmc, nt_mcmc = int(sys.argv[3]) if len(sys.argv) > 3 else 101, int(sys.argv[4]) if len(sys.argv) > 4 else 400

gx = make_grid(nx_data, 0.0, L)
g = Field(gx, gx.points**2 + 1.0)
tl_data = np.linspace(0.0, T, nt_data + 1)
h0d = tl_data * (2 * tl_data + 1)
h1d = 2 + tl_data * (2 * tl_data + 2)
obs_times = np.linspace(0.0, T, 100)

rho_grid = make_grid(200, 0.0, T)
t = rho_grid.points
# stand-in truth: 0.5 / 1.5 / 0.5 with jumps at 1/3, 2/3 (left-limit at nodes)
truth = Field(rho_grid, np.where(t <= 1.0 / 3.0, 0.5, np.where(t <= 2.0 / 3.0, 1.5, 0.5)))

data_model = heat_model(HeatRobinSetup(L, T, nx_data, nt_data, g, h0d, h1d, obs_times))
rng = np.random.default_rng(2024)
obs = generate_data(data_model, truth, 0.01, rng)

# inference model (possibly reduced resolution)
gxm = make_grid(nx_mcmc, 0.0, L)
gm = Field(gxm, gxm.points**2 + 1.0)
tlm = np.linspace(0.0, T, nt_mcmc + 1)
mcmc_model = heat_model(
    HeatRobinSetup(L, T, nx_mcmc, nt_mcmc, gm, tlm * (2 * tlm + 1), 2 + tlm * (2 * tlm + 2), obs_times)
)

fac = factor(build_covariance(SqExpKernel(0.1, 0.02), rho_grid))
prob = PosteriorProblem(model=mcmc_model, obs=obs, tv=TVTerm(300.0), factor=fac)
probe = tuple(int(round(p * 199)) for p in (0.2, 0.5, 0.8))

init = Field(rho_grid, fac.lower @ np.random.default_rng(999).standard_normal(200))
print(f"init: TV={np.abs(np.diff(init.values)).sum():.2f}")

for kind in ("pcn", "spcn"):
    cfg = SamplerConfig(n_samples=n_run, beta=0.02, k=10, burn_in=burn, thin=50, seed=11)
    t0 = time.time()
    out = run_chain(kind, init, cfg, prob, probe_indices=probe)
    esses = [ess(out.probe_series[:, j]) for j in range(3)]
    err = np.abs(out.mean.values - truth.values)
    print(
        f"{kind}: {time.time()-t0:.0f}s outer={out.stats.outer_accept_rate:.3f} "
        f"inner={out.stats.inner_accept_rate:.3f} ess={[f'{e:.0f}' for e in esses]} "
        f"mean abs err(mean)={err.mean():.3f}"
    )
