"""Posterior summaries and mixing diagnostics: ACF, integrated
autocorrelation time, effective sample size, and pointwise chain summaries.

Estimator conventions (fixed so reported numbers are comparable across runs):
the ACF uses the biased estimator (normalize by N) with the series mean
subtracted; the IACT sums the ACF through the first negative lag and clamps
at zero; quantiles interpolate linearly between order statistics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .grid import Field
from .samplers import ChainOutput


@dataclass(frozen=True)
class PosteriorSummary:
    """Pointwise mean/sd (streaming over all states) and 95% credible band
    (empirical quantiles of the thinned samples)."""

    mean: Field
    sd: Field
    ci_lo: Field
    ci_hi: Field


def _as_series(series) -> np.ndarray:
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("series must be a 1-D vector with at least 2 entries")
    if not np.all(np.isfinite(x)):
        raise ValueError("series must be finite")
    return x


def _autocorr(x: np.ndarray) -> np.ndarray:
    """Biased autocorrelation for all lags 0..N-1 via FFT."""
    n = x.size
    d = x - x.mean()
    size = scipy.fft.next_fast_len(2 * n)
    f = scipy.fft.rfft(d, size)
    acov = scipy.fft.irfft(f * np.conj(f), size)[:n] / n
    if acov[0] <= 0:
        raise ValueError("series has zero variance (stuck chain)")
    return acov / acov[0]


def acf(series, max_lag: int) -> np.ndarray:
    """Autocorrelation at lags 0..max_lag; ``acf[0] == 1`` by construction."""
    x = _as_series(series)
    if not 0 < max_lag < x.size:
        raise ValueError(f"max_lag must be in [1, {x.size - 1}], got {max_lag}")
    return _autocorr(x)[: max_lag + 1]


def iact(series) -> float:
    """Integrated autocorrelation time with initial positive-sequence truncation.

    Sums the ACF from lag 1 through the first negative lag; the result is
    clamped at zero (an iid or alternating series has tau ~ 0).
    """
    rho = _autocorr(_as_series(series))
    tail = rho[1:]
    negative = np.nonzero(tail < 0.0)[0]
    stop = negative[0] + 1 if negative.size else tail.size
    return max(float(tail[:stop].sum()), 0.0)


def ess(series) -> float:
    """Effective sample size ``N / (1 + 2*tau)``."""
    x = _as_series(series)
    return x.size / (1.0 + 2.0 * iact(x))


def summarize(output: ChainOutput) -> PosteriorSummary:
    """Pointwise posterior summary of a chain.

    Mean and sd come from the running moments over every post-burn-in state;
    the 95% band is the 2.5%/97.5% empirical quantiles of the thinned samples
    at each node (at least 40 stored samples required).
    """
    if output.samples.shape[0] < 40:
        raise ValueError(
            f"need at least 40 stored samples for quantiles, got {output.samples.shape[0]}"
        )
    lo, hi = np.quantile(output.samples, [0.025, 0.975], axis=0, method="linear")
    return PosteriorSummary(
        mean=output.mean,
        sd=output.sd,
        ci_lo=Field(output.grid, lo),
        ci_hi=Field(output.grid, hi),
    )
