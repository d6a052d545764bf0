"""Run criteria 5+6 exactly as the acceptance fixture does."""
import time
import numpy as np
from tvgauss import (Field, PosteriorProblem, SamplerConfig, SqExpKernel, TVTerm,
                     build_covariance, factor, generate_data, make_grid, run_chain)
from tvgauss.diagnostics import ess
from tvgauss.experiments import (HEAT_GAMMA, HEAT_LAMBDA, HEAT_SIGMA,
                                 build_heat_model, probe_indices, robin_truth)

rho_grid = make_grid(200, 0.0, 1.0)
truth = robin_truth(rho_grid)
data_model = build_heat_model()
obs = generate_data(data_model, truth, HEAT_SIGMA, np.random.default_rng(2024))
mcmc_model = build_heat_model(61, 150)
fac = factor(build_covariance(SqExpKernel(HEAT_GAMMA, 0.02), rho_grid))
problem = PosteriorProblem(model=mcmc_model, obs=obs, tv=TVTerm(HEAT_LAMBDA), factor=fac)
init = Field(rho_grid, fac.lower @ np.random.default_rng(999).standard_normal(200))
probes = probe_indices(rho_grid, (0.2, 0.5, 0.8))

outputs = {}
for kind in ("pcn", "spcn"):
    cfg = SamplerConfig(n_samples=400_000, beta=0.02, k=10, burn_in=100_000, thin=200, seed=11)
    t0 = time.time()
    outputs[kind] = run_chain(kind, init, cfg, problem, probe_indices=probes)
    o = outputs[kind]
    print(f"{kind}: {time.time()-t0:.0f}s outer={o.stats.outer_accept_rate:.4f} "
          f"inner={o.stats.inner_accept_rate:.4f}", flush=True)
ratios = [ess(outputs["spcn"].probe_series[:, j]) / ess(outputs["pcn"].probe_series[:, j])
          for j in range(3)]
print("C5 pcn in [0.05,0.25]:", 0.05 <= outputs["pcn"].stats.outer_accept_rate <= 0.25)
print("C5 spcn in [0.30,0.50]:", 0.30 <= outputs["spcn"].stats.outer_accept_rate <= 0.50)
print("C6 ratios:", [f"{r:.2f}" for r in ratios], "all>=2:", all(r >= 2 for r in ratios))
