"""Criterion 3 pilot: TG denoising mixing at lambda=500, d=0.02."""
import time
import numpy as np
from tvgauss import (Field, PosteriorProblem, SamplerConfig, SqExpKernel, TVTerm,
                     build_covariance, denoising_model, factor, generate_data,
                     make_grid, run_chain)
from tvgauss.diagnostics import ess, iact
from tvgauss.experiments import denoising_locations, denoising_truth

locs = denoising_locations()
data_grid = make_grid(353, 0.0, 1.0)
obs = generate_data(denoising_model(locs, data_grid), denoising_truth(data_grid),
                    0.02, np.random.default_rng(101))

for n in (89, 353):
    grid = make_grid(n, 0.0, 1.0)
    model = denoising_model(locs, grid)
    fac = factor(build_covariance(SqExpKernel(0.1, 0.02), grid))
    prob = PosteriorProblem(model=model, obs=obs, tv=TVTerm(500.0), factor=fac)
    init = Field(grid, fac.lower @ np.random.default_rng(999).standard_normal(n))
    for beta in (0.004, 0.008, 0.015):
        cfg = SamplerConfig(n_samples=150_000, beta=beta, k=10, burn_in=50_000, thin=100, seed=7)
        t0 = time.time()
        out = run_chain("spcn", init, cfg, prob, probe_indices=(n // 2,))
        s = out.probe_series[:, 0]
        print(f"N={n} beta={beta}: {time.time()-t0:.0f}s outer={out.stats.outer_accept_rate:.3f} "
              f"inner={out.stats.inner_accept_rate:.3f} probe_tau={iact(s):.0f} "
              f"probe_mean={s.mean():.3f} probe_sd={s.std():.3f}", flush=True)
