"""Bias vs noise at N=89/177: two seeds per N, locate the sup."""
import time
import numpy as np
from tvgauss import (Field, PosteriorProblem, SamplerConfig, SqExpKernel, TVTerm,
                     build_covariance, denoising_model, factor, generate_data,
                     make_grid, regrid, run_chain)
from tvgauss.experiments import denoising_locations, denoising_truth

locs = denoising_locations()
data_grid = make_grid(353, 0.0, 1.0)
obs = generate_data(denoising_model(locs, data_grid), denoising_truth(data_grid),
                    0.02, np.random.default_rng(101))
fine = make_grid(353, 0.0, 1.0)

means = {}
sds = {}
for n in (89, 177):
    grid = make_grid(n, 0.0, 1.0)
    model = denoising_model(locs, grid)
    fac = factor(build_covariance(SqExpKernel(0.1, 0.02), grid))
    prob = PosteriorProblem(model=model, obs=obs, tv=TVTerm(500.0), factor=fac)
    for seed in (7, 5007):
        init = Field(grid, fac.lower @ np.random.default_rng(999 + seed).standard_normal(n))
        cfg = SamplerConfig(n_samples=1_000_000, beta=0.004, k=10, burn_in=100_000,
                            thin=1000, seed=seed + n)
        t0 = time.time()
        out = run_chain("spcn", init, cfg, prob)
        means[(n, seed)] = regrid(out.mean, fine).values
        sds[(n, seed)] = regrid(out.sd, fine).values
        print(f"N={n} seed={seed}: {time.time()-t0:.0f}s", flush=True)

t = fine.points
def show(a, b, label):
    d = np.abs(means[a] - means[b])
    i = int(np.argmax(d))
    print(f"{label}: sup={d.max():.4f} at t={t[i]:.3f} (jump at 1/3={1/3:.3f}, 2/3={2/3:.3f})")

show((89, 7), (89, 5007), "within N=89 (seeds)  ")
show((177, 7), (177, 5007), "within N=177 (seeds) ")
show((89, 7), (177, 7), "across 89-177 (seed A)")
show((89, 5007), (177, 5007), "across 89-177 (seed B)")
avg89 = 0.5 * (means[(89, 7)] + means[(89, 5007)])
avg177 = 0.5 * (means[(177, 7)] + means[(177, 5007)])
d = np.abs(avg89 - avg177)
i = int(np.argmax(d))
print(f"across seed-averaged: sup={d.max():.4f} at t={t[i]:.3f}")
print(f"posterior sd at sup node: {sds[(89,7)][i]:.4f}")
