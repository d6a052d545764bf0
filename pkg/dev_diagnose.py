"""Diagnose the slow mode: half-chain IACTs, quarter means, potential traces."""
import time
import numpy as np
from tvgauss import (Field, PosteriorProblem, SamplerConfig, SqExpKernel,
                     TVTerm, build_covariance, factor, generate_data,
                     make_grid, run_chain)
from tvgauss.experiments import build_heat_model, robin_truth
from tvgauss.diagnostics import iact, ess

rho_grid = make_grid(200, 0.0, 1.0)
truth = robin_truth(rho_grid)
model = build_heat_model()
obs = generate_data(model, truth, 0.05, np.random.default_rng(2024))
fac = factor(build_covariance(SqExpKernel(0.1, 0.05), rho_grid))
prob = PosteriorProblem(model=model, obs=obs, tv=TVTerm(300.0), factor=fac)
init = Field(rho_grid, fac.lower @ np.random.default_rng(999).standard_normal(200))
probe = (40, 100, 160)

for kind in ("pcn", "spcn"):
    cfg = SamplerConfig(n_samples=300_000, beta=0.02, k=10, burn_in=100_000, thin=100, seed=11)
    t0 = time.time()
    out = run_chain(kind, init, cfg, prob, probe_indices=probe)
    print(f"== {kind}: {time.time()-t0:.0f}s outer={out.stats.outer_accept_rate:.3f} "
          f"inner={out.stats.inner_accept_rate:.3f}")
    for j, p in enumerate((0.2, 0.5, 0.8)):
        s = out.probe_series[:, j]
        h1, h2 = s[:150_000], s[150_000:]
        q = [s[i*75_000:(i+1)*75_000].mean() for i in range(4)]
        print(f"  t={p}: tau_h1={iact(h1):7.0f} tau_h2={iact(h2):7.0f} "
              f"quarter_means={[f'{m:.3f}' for m in q]} sd={s.std():.3f}")
    # TV along the thinned samples
    tvs = np.abs(np.diff(out.samples, axis=1)).sum(axis=1)
    print(f"  TV(thinned): mean={tvs.mean():.2f} sd={tvs.std():.2f} "
          f"first/last quarter means: {tvs[:750].mean():.2f} {tvs[-750:].mean():.2f}")
