"""Full criterion 3+4 validation: mesh study at 1e6 samples."""
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
N_LIST = (89, 177, 353)
SEED = 7
fine = make_grid(353, 0.0, 1.0)

means = {}
for prior in ("tg", "tv"):
    for n in N_LIST:
        grid = make_grid(n, 0.0, 1.0)
        model = denoising_model(locs, grid)
        tv = TVTerm(500.0)
        if prior == "tg":
            fac = factor(build_covariance(SqExpKernel(0.1, 0.02), grid))
            prob = PosteriorProblem(model=model, obs=obs, tv=tv, factor=fac)
            init = Field(grid, fac.lower @ np.random.default_rng(999).standard_normal(n))
            kind, cfg = "spcn", SamplerConfig(n_samples=1_000_000, beta=0.004, k=10,
                                              burn_in=100_000, thin=1000, seed=SEED + n)
        else:
            prob = PosteriorProblem(model=model, obs=obs, tv=tv, factor=None)
            init = Field(grid, np.zeros(n))
            kind, cfg = "rw-tv", SamplerConfig(n_samples=1_000_000, burn_in=100_000,
                                               thin=1000, seed=SEED + n,
                                               step_sd=1.0 / (500.0 * n**0.5))
        t0 = time.time()
        out = run_chain(kind, init, cfg, prob)
        means[(prior, n)] = regrid(out.mean, fine).values
        print(f"{prior} N={n}: {time.time()-t0:.0f}s accept={out.stats.outer_accept_rate:.3f} "
              f"inner={out.stats.inner_accept_rate:.3f}", flush=True)
    sup = 0.0
    for i, n1 in enumerate(N_LIST):
        for n2 in N_LIST[i+1:]:
            d = np.max(np.abs(means[(prior, n1)] - means[(prior, n2)]))
            print(f"  {prior} supdiff {n1}-{n2}: {d:.4f}", flush=True)
            sup = max(sup, d)
    print(f"{prior} MAX: {sup:.4f}", flush=True)
