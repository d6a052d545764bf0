"""Candidate operating point B: lambda=100, d=0.02, sigma=0.05."""
import time
import numpy as np
from tvgauss import (Field, PosteriorProblem, SamplerConfig, SqExpKernel,
                     TVTerm, build_covariance, factor, generate_data,
                     make_grid, run_chain)
from tvgauss.experiments import build_heat_model, robin_truth
from tvgauss.diagnostics import iact, ess

LAM, D, SD = 100.0, 0.02, 0.025
rho_grid = make_grid(200, 0.0, 1.0)
truth = robin_truth(rho_grid)
model = build_heat_model()
obs = generate_data(model, truth, SD, np.random.default_rng(2024))
fac = factor(build_covariance(SqExpKernel(0.1, D), rho_grid))
prob = PosteriorProblem(model=model, obs=obs, tv=TVTerm(LAM), factor=fac)
init = Field(rho_grid, fac.lower @ np.random.default_rng(999).standard_normal(200))
probe = (40, 100, 160)

results = {}
for kind in ("pcn", "spcn"):
    cfg = SamplerConfig(n_samples=200_000, beta=0.02, k=10, burn_in=100_000, thin=100, seed=11)
    t0 = time.time()
    out = run_chain(kind, init, cfg, prob, probe_indices=probe)
    esses = [ess(out.probe_series[:, j]) for j in range(3)]
    results[kind] = esses
    print(f"== {kind}: {time.time()-t0:.0f}s outer={out.stats.outer_accept_rate:.3f} "
          f"inner={out.stats.inner_accept_rate:.3f}", flush=True)
    for j, p in enumerate((0.2, 0.5, 0.8)):
        s = out.probe_series[:, j]
        h1, h2 = s[:100_000], s[100_000:]
        print(f"  t={p}: ess={esses[j]:8.0f} tau_h1={iact(h1):6.0f} tau_h2={iact(h2):6.0f} "
              f"mean={s.mean():.3f} sd={s.std():.3f}", flush=True)
    err = np.abs(out.mean.values - truth.values).mean()
    print(f"  mean|err|={err:.3f}")
r = [results["spcn"][j] / results["pcn"][j] for j in range(3)]
print(f"ESS ratios spcn/pcn: {[f'{x:.2f}' for x in r]}")
