"""Criterion 2 pilot: pCN with R=0 vs exact GP on the denoising problem."""
import sys
import time
import numpy as np
from tvgauss import (Field, ObservationSet, PosteriorProblem, SamplerConfig, SqExpKernel,
                     build_covariance, denoising_model, factor, generate_data,
                     gp_posterior_exact, make_grid, run_chain)
from tvgauss.diagnostics import ess
from tvgauss.experiments import denoising_locations, denoising_truth

grid = make_grid(89, 0.0, 1.0)
truth = denoising_truth(grid)
model = denoising_model(denoising_locations(), grid)
obs = generate_data(model, truth, 0.02, np.random.default_rng(101))
kernel = SqExpKernel(0.1, 0.08)
fac = factor(build_covariance(kernel, grid))
exact_mean, exact_sd = gp_posterior_exact(kernel, grid, obs)
prob = PosteriorProblem(model=model, obs=obs, tv=None, factor=fac)

for beta in (0.05, 0.1, 0.2):
    cfg = SamplerConfig(n_samples=200_000, beta=beta, burn_in=20_000, thin=100, seed=7)
    t0 = time.time()
    out = run_chain("pcn", Field(grid, np.zeros(89)), cfg, prob, probe_indices=(44,))
    sup = np.max(np.abs(out.mean.values - exact_mean.values))
    print(f"beta={beta}: {time.time()-t0:.0f}s accept={out.stats.outer_accept_rate:.3f} "
          f"sup_diff={sup:.4f} probe_ess={ess(out.probe_series[:,0]):.0f}", flush=True)
