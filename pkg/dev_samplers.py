"""Dev checks for sampler correctness and speed."""
import time

import numpy as np
from scipy import integrate

from tvgauss import (
    Field,
    ObservationSet,
    PosteriorProblem,
    SamplerConfig,
    SqExpKernel,
    TVTerm,
    build_covariance,
    denoising_model,
    factor,
    gp_posterior_exact,
    make_grid,
    run_chain,
)
from tvgauss.diagnostics import ess
from tvgauss.gaussian import CholeskyFactor
from tvgauss.grid import Grid1D

# --- 1. pCN with Phi=0, R=0 preserves mu0 -------------------------------
grid = make_grid(30, 0.0, 1.0)
cov = build_covariance(SqExpKernel(0.1, 0.1), grid)
fac = factor(cov)
empty_obs = ObservationSet(np.array([]), np.array([]), 1.0)
model = denoising_model(np.array([]), grid)
prob = PosteriorProblem(model=model, obs=empty_obs, tv=None, factor=fac)
cfg = SamplerConfig(n_samples=100_000, beta=0.9, burn_in=1000, thin=100, seed=42)
t0 = time.time()
out = run_chain("pcn", Field(grid, np.zeros(30)), cfg, prob)
print(f"pcn prior chain: {time.time()-t0:.1f}s accept={out.stats.outer_accept_rate:.3f}")
emp_var = out.sd.values**2
rel = np.abs(emp_var - np.diag(cov.matrix)) / np.diag(cov.matrix)
print(f"prior-preservation: max rel var err {rel.max():.4f}")

# --- 2. toy 2-node target: quadrature oracle ----------------------------
# target density on R^2 propto exp(-(u1^2+u2^2) - |u2-u1|)
# rotate: s=(u1+u2)/sqrt2 ~ exp(-s^2); w=(u2-u1)/sqrt2 ~ exp(-w^2 - sqrt2|w|)


def wdens(w):
    return np.exp(-w * w - np.sqrt(2.0) * np.abs(w))


zw, _ = integrate.quad(wdens, -20, 20)
ew2 = integrate.quad(lambda w: w * w * wdens(w), -20, 20)[0] / zw
es2 = 0.5
# E[u1^2] = E[u2^2] = (E[s^2]+E[w^2])/2 ; E[u1 u2] = (E[s^2]-E[w^2])/2
eu2 = 0.5 * (es2 + ew2)
eu12 = 0.5 * (es2 - ew2)
print(f"quadrature: E[u_i^2]={eu2:.6f} E[u1 u2]={eu12:.6f}")

grid2 = make_grid(2, 0.0, 1.0)
fac2 = CholeskyFactor(grid=grid2, lower=np.eye(2), jitter=0.0)
# Phi = 0.5*||u||^2 via observing both nodes with y=0, sigma=1
model2 = denoising_model(np.array([0.0, 1.0]), grid2)
obs2 = ObservationSet(np.array([0.0, 1.0]), np.zeros(2), 1.0)
prob2 = PosteriorProblem(model=model2, obs=obs2, tv=TVTerm(1.0), factor=fac2)
cfg2 = SamplerConfig(n_samples=400_000, beta=0.5, k=5, burn_in=2000, thin=40, seed=3)
t0 = time.time()
out2 = run_chain("spcn", Field(grid2, np.zeros(2)), cfg2, prob2, probe_indices=(0, 1))
print(f"spcn toy: {time.time()-t0:.1f}s accept={out2.stats.outer_accept_rate:.3f} "
      f"inner={out2.stats.inner_accept_rate:.3f}")
u1 = out2.probe_series[:, 0]
u2 = out2.probe_series[:, 1]
for name, series, truth in [
    ("E u1", u1, 0.0), ("E u2", u2, 0.0),
    ("E u1^2", u1 * u1, eu2), ("E u2^2", u2 * u2, eu2),
    ("E u1u2", u1 * u2, eu12),
]:
    se = series.std() / np.sqrt(ess(series))
    print(f"  {name}: {series.mean():+.5f} vs {truth:+.5f} ({abs(series.mean()-truth)/se:.2f} se)")

# --- 3. timing: pcn & spcn at N=353 and 200 -----------------------------
for n, kind, kcnt in [(353, "pcn", 1), (353, "spcn", 10), (200, "spcn", 10)]:
    g = make_grid(n, 0.0, 1.0)
    fa = factor(build_covariance(SqExpKernel(0.1, 0.02), g))
    locs = np.linspace(0, 1, 23)
    mo = denoising_model(locs, g)
    ob = ObservationSet(locs, np.zeros(23), 0.02)
    pr = PosteriorProblem(model=mo, obs=ob, tv=TVTerm(500.0), factor=fa)
    c = SamplerConfig(n_samples=20_000, beta=0.02, k=kcnt, thin=1000, seed=1)
    t0 = time.time()
    o = run_chain(kind, Field(g, np.zeros(n)), c, pr)
    dt = (time.time() - t0) / 20_000 * 1e6
    print(f"{kind} N={n} k={kcnt}: {dt:.0f} us/outer step, accept={o.stats.outer_accept_rate:.3f}"
          f" inner={o.stats.inner_accept_rate:.3f}")
