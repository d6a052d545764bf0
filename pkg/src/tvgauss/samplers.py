"""MCMC kernels for the TV-Gaussian posterior and the chain driver.

Three kernels are provided:

* ``pcn``   - standard preconditioned Crank-Nicolson on the combined potential
  misfit + regularizer, targeting exp(-(Phi+R)) relative to the Gaussian
  reference measure.
* ``spcn``  - splitting pCN: k inner pCN moves accepted by the cheap TV term
  alone, then one outer Metropolis accept/reject by the data misfit. Exactly
  one misfit evaluation per outer step, regardless of k.
* ``rw-tv`` - finite-dimensional Gaussian random-walk Metropolis on the
  density exp(-(Phi + lambda*TV)) with Lebesgue reference, for the
  discretization-dependence comparison of the pure TV prior.

Reproducibility: each chain owns a single ``numpy.random.Generator`` (PCG64)
and consumes variates in a fixed order per step. A pcn/rw-tv step draws the
n standard normals of the proposal and then one uniform for the accept
decision. An S-pCN step draws the k*n inner-proposal normals as one block
(row i belongs to inner move i), then one uniform per inner move, then the
outer uniform. Uniforms are drawn even when the acceptance probability is 1,
so the stream position never depends on accept/reject outcomes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .forward import ForwardModel
from .gaussian import CholeskyFactor
from .grid import Field, Grid1D, ObservationSet
from .potentials import TVTerm

KERNEL_KINDS = ("pcn", "spcn", "rw-tv")

ValueFn = Callable[[np.ndarray], float]


class ChainAbortError(RuntimeError):
    """A kernel failed mid-run; ``partial`` holds the flushed chain so far."""

    def __init__(self, step: int, cause: str, partial: "ChainOutput"):
        self.step = step
        self.partial = partial
        super().__init__(f"chain aborted at post-burn-in step {step}: {cause}")


@dataclass(frozen=True)
class SamplerConfig:
    """Chain settings; ``beta`` is the pCN stepsize, ``k`` the inner TV moves."""

    n_samples: int
    beta: float = 0.02
    k: int = 10
    burn_in: int = 0
    thin: int = 1
    seed: int = 0
    step_sd: float = 0.01

    def __post_init__(self) -> None:
        if self.n_samples < 0:
            raise ValueError("n_samples must be nonnegative")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must be in (0, 1], got {self.beta}")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        if self.thin < 1:
            raise ValueError("thin must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.step_sd <= 0:
            raise ValueError("step_sd must be positive")


@dataclass
class ChainStats:
    """Accept/reject and cost tallies for the post-burn-in sampling phase."""

    outer_proposed: int = 0
    outer_accepted: int = 0
    inner_proposed: int = 0
    inner_accepted: int = 0
    forward_evals: int = 0

    @property
    def outer_accept_rate(self) -> float:
        return self.outer_accepted / self.outer_proposed if self.outer_proposed else 0.0

    @property
    def inner_accept_rate(self) -> float:
        return self.inner_accepted / self.inner_proposed if self.inner_proposed else 0.0


@dataclass(frozen=True)
class ChainOutput:
    """Thinned samples, streaming moments over all post-burn-in states, and
    per-step series at the requested probe nodes."""

    grid: Grid1D
    samples: np.ndarray  # (n_samples // thin, n)
    mean: Field
    second_moment: Field
    sd: Field
    probe_indices: tuple[int, ...]
    probe_series: np.ndarray  # (n_samples, len(probe_indices))
    stats: ChainStats
    config: SamplerConfig


@dataclass(frozen=True)
class PosteriorProblem:
    """Immutable bundle defining the target: forward model, data, TV weight
    (None means R = 0), and the Gaussian reference factor (pcn/spcn only)."""

    model: ForwardModel
    obs: ObservationSet
    tv: TVTerm | None = None
    factor: CholeskyFactor | None = None

    def misfit_fn(self, grid: Grid1D) -> ValueFn:
        if self.model.m != self.obs.m:
            raise ValueError(
                f"model outputs {self.model.m} values, observations have {self.obs.m}"
            )
        predict = self.model.predictor(grid)
        y = self.obs.y
        inv_sd = 1.0 / self.obs.noise_sd

        def phi(values: np.ndarray) -> float:
            r = (predict(values) - y) * inv_sd
            return 0.5 * float(r @ r)

        return phi

    def regularizer_fn(self, grid: Grid1D) -> ValueFn:
        if self.tv is None:
            return lambda values: 0.0
        lam = self.tv.lam

        def reg(values: np.ndarray) -> float:
            return lam * float(np.abs(np.diff(values)).sum())

        return reg


def pcn_propose(u: Field, beta: float, w: Field) -> Field:
    """pCN proposal ``sqrt(1-beta^2) u + beta w`` with ``w`` a prior draw.

    ``beta=0`` degenerates to the identity (useful in tests); chain configs
    require beta > 0.
    """
    if u.grid != w.grid:
        raise ValueError("state and prior draw live on different grids")
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must be in [0, 1], got {beta}")
    return Field(u.grid, math.sqrt(1.0 - beta * beta) * u.values + beta * w.values)


def _acceptance(delta_pot: float) -> float:
    """min(1, exp(-delta_pot)) without overflow for large negative deltas."""
    acc = 1.0 if delta_pot <= 0.0 else math.exp(-delta_pot)
    assert 0.0 <= acc <= 1.0
    assert delta_pot > 0.0 or acc == 1.0
    return acc


def _check_finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise RuntimeError(f"non-finite {what} ({value}) encountered")
    return value


class _PcnCore:
    """Standard pCN; caches Phi+R of the current state (one misfit per step)."""

    def __init__(self, misfit: ValueFn, reg: ValueFn, factor: CholeskyFactor, beta: float):
        self._misfit = misfit
        self._reg = reg
        self._lower = factor.lower
        self._beta = beta
        self._keep = math.sqrt(1.0 - beta * beta)
        self.stats = ChainStats()
        self.state: np.ndarray | None = None
        self._pot = 0.0

    def reset(self, values: np.ndarray) -> None:
        self.state = values
        self.stats.forward_evals += 1
        self._pot = _check_finite(
            self._misfit(values) + self._reg(values), "initial potential"
        )

    def step(self, rng: np.random.Generator) -> bool:
        w = self._lower @ rng.standard_normal(self.state.shape[0])
        v = self._keep * self.state + self._beta * w
        self.stats.forward_evals += 1
        pot_v = _check_finite(self._misfit(v) + self._reg(v), "proposal potential")
        acc = _acceptance(pot_v - self._pot)
        u01 = rng.random()
        self.stats.outer_proposed += 1
        if u01 < acc:
            self.state = v
            self._pot = pot_v
            self.stats.outer_accepted += 1
            return True
        return False


class _SpcnCore:
    """Splitting pCN: k inner moves on the TV term, outer accept on the misfit.

    R values are cached across inner moves and Phi across outer steps, so a
    step costs exactly one misfit evaluation plus k regularizer evaluations.
    """

    def __init__(
        self,
        misfit: ValueFn,
        reg: ValueFn,
        factor: CholeskyFactor,
        beta: float,
        k: int,
    ):
        self._misfit = misfit
        self._reg = reg
        self._lower = factor.lower
        self._beta = beta
        self._keep = math.sqrt(1.0 - beta * beta)
        self._k = k
        self.stats = ChainStats()
        self.state: np.ndarray | None = None
        self._phi = 0.0
        self._r = 0.0
        self.last_inner_accepts = 0

    def reset(self, values: np.ndarray) -> None:
        self.state = values
        self.stats.forward_evals += 1
        self._phi = _check_finite(self._misfit(values), "initial misfit")
        self._r = _check_finite(self._reg(values), "initial regularizer")

    def step(self, rng: np.random.Generator) -> bool:
        n = self.state.shape[0]
        v = self.state
        r_v = self._r
        inner_accepts = 0
        # one block of prior draws for all k inner moves (single GEMM)
        draws = rng.standard_normal((self._k, n)) @ self._lower.T
        for i in range(self._k):
            prop = self._keep * v + self._beta * draws[i]
            r_prop = _check_finite(self._reg(prop), "inner regularizer")
            acc = _acceptance(r_prop - r_v)
            u01 = rng.random()
            self.stats.inner_proposed += 1
            if u01 < acc:
                v = prop
                r_v = r_prop
                inner_accepts += 1
                self.stats.inner_accepted += 1
        self.last_inner_accepts = inner_accepts
        # outer accept/reject on the misfit alone (one forward solve)
        self.stats.forward_evals += 1
        phi_v = _check_finite(self._misfit(v), "proposal misfit")
        acc = _acceptance(phi_v - self._phi)
        u01 = rng.random()
        self.stats.outer_proposed += 1
        if u01 < acc:
            self.state = v
            self._phi = phi_v
            self._r = r_v
            self.stats.outer_accepted += 1
            return True
        return False


class _RwCore:
    """Gaussian random-walk Metropolis on exp(-(Phi+R)) with Lebesgue reference."""

    def __init__(self, misfit: ValueFn, reg: ValueFn, step_sd: float):
        self._misfit = misfit
        self._reg = reg
        self._sd = step_sd
        self.stats = ChainStats()
        self.state: np.ndarray | None = None
        self._pot = 0.0

    def reset(self, values: np.ndarray) -> None:
        self.state = values
        self.stats.forward_evals += 1
        self._pot = _check_finite(
            self._misfit(values) + self._reg(values), "initial potential"
        )

    def step(self, rng: np.random.Generator) -> bool:
        v = self.state + self._sd * rng.standard_normal(self.state.shape[0])
        self.stats.forward_evals += 1
        pot_v = _check_finite(self._misfit(v) + self._reg(v), "proposal potential")
        acc = _acceptance(pot_v - self._pot)
        u01 = rng.random()
        self.stats.outer_proposed += 1
        if u01 < acc:
            self.state = v
            self._pot = pot_v
            self.stats.outer_accepted += 1
            return True
        return False


def _make_core(kind: str, config: SamplerConfig, misfit: ValueFn, reg: ValueFn,
               factor: CholeskyFactor | None):
    if kind == "pcn" or kind == "spcn":
        if factor is None:
            raise ValueError(f"kernel '{kind}' requires a Cholesky factor")
        if kind == "pcn":
            return _PcnCore(misfit, reg, factor, config.beta)
        return _SpcnCore(misfit, reg, factor, config.beta, config.k)
    if kind == "rw-tv":
        return _RwCore(misfit, reg, config.step_sd)
    raise ValueError(f"unknown kernel kind '{kind}'; expected one of {KERNEL_KINDS}")


def run_chain(
    kind: str,
    initial: Field,
    config: SamplerConfig,
    problem: PosteriorProblem,
    probe_indices: Sequence[int] = (),
) -> ChainOutput:
    """Run burn-in plus sampling; fully deterministic given ``config.seed``.

    Streaming mean/second-moment use every post-burn-in state (Welford
    update); every ``thin``-th state is stored; the state at each probe node
    is recorded at every post-burn-in step. ``ChainStats`` covers the
    post-burn-in phase only, so ``forward_evals == n_samples`` for every
    kernel and acceptance rates refer to the reported sampling phase.
    """
    grid = initial.grid
    n = grid.n
    probes = tuple(int(i) for i in probe_indices)
    if any(i < 0 or i >= n for i in probes):
        raise ValueError("probe index outside the grid")
    if problem.factor is not None and problem.factor.grid != grid:
        raise ValueError("factor grid does not match the initial state grid")
    misfit = problem.misfit_fn(grid)
    reg = problem.regularizer_fn(grid)
    core = _make_core(kind, config, misfit, reg, problem.factor)

    rng = np.random.default_rng(config.seed)
    core.reset(initial.values.copy())
    n_stored = config.n_samples // config.thin
    samples = np.empty((n_stored, n))
    probe_series = np.empty((config.n_samples, len(probes)))
    probe_list = np.array(probes, dtype=np.intp)
    mean = np.zeros(n)
    m2 = np.zeros(n)

    def finalize(stored: int, recorded: int, count: int) -> ChainOutput:
        sd = np.sqrt(m2 / count) if count else np.zeros(n)
        second = m2 / count + mean * mean if count else np.zeros(n)
        out_samples = samples[:stored].copy()
        out_probe = probe_series[:recorded].copy()
        out_samples.setflags(write=False)
        out_probe.setflags(write=False)
        return ChainOutput(
            grid=grid,
            samples=out_samples,
            mean=Field(grid, mean),
            second_moment=Field(grid, second),
            sd=Field(grid, sd),
            probe_indices=probes,
            probe_series=out_probe,
            stats=core.stats,
            config=config,
        )

    step_now = 0
    try:
        for _ in range(config.burn_in):
            core.step(rng)
        core.stats = ChainStats()  # stats of record: sampling phase only
        count = 0
        stored = 0
        for i in range(1, config.n_samples + 1):
            step_now = i
            core.step(rng)
            x = core.state
            count += 1
            delta = x - mean
            mean += delta / count
            m2 += delta * (x - mean)
            if probes:
                probe_series[i - 1] = x[probe_list]
            if i % config.thin == 0:
                samples[stored] = x
                stored += 1
    except RuntimeError as exc:
        partial = finalize(stored if step_now else 0, max(step_now - 1, 0),
                           max(step_now - 1, 0))
        raise ChainAbortError(step_now, str(exc), partial) from exc
    return finalize(n_stored, config.n_samples, count if config.n_samples else 0)


FieldFn = Callable[[Field], float]


def _lift(fn: FieldFn, grid: Grid1D) -> ValueFn:
    return lambda values: fn(Field(grid, values))


def pcn_step(
    state: Field,
    misfit: FieldFn,
    regularizer: FieldFn,
    factor: CholeskyFactor,
    beta: float,
    rng: np.random.Generator,
) -> tuple[Field, bool]:
    """One standalone pCN step (recomputes the current potential)."""
    core = _PcnCore(_lift(misfit, state.grid), _lift(regularizer, state.grid),
                    factor, beta)
    core.reset(state.values.copy())
    accepted = core.step(rng)
    return Field(state.grid, core.state), accepted


def spcn_step(
    state: Field,
    misfit: FieldFn,
    regularizer: FieldFn,
    factor: CholeskyFactor,
    beta: float,
    k: int,
    rng: np.random.Generator,
) -> tuple[Field, bool, int]:
    """One standalone S-pCN step; returns (state, outer accepted, inner accepts)."""
    core = _SpcnCore(_lift(misfit, state.grid), _lift(regularizer, state.grid),
                     factor, beta, k)
    core.reset(state.values.copy())
    accepted = core.step(rng)
    return Field(state.grid, core.state), accepted, core.last_inner_accepts


def rw_tv_step(
    state: Field,
    misfit: FieldFn,
    tv: TVTerm,
    step_sd: float,
    rng: np.random.Generator,
) -> tuple[Field, bool]:
    """One standalone random-walk Metropolis step on exp(-(Phi + lambda*TV))."""
    if step_sd <= 0:
        raise ValueError("step_sd must be positive")
    lam = tv.lam
    reg: ValueFn = lambda values: lam * float(np.abs(np.diff(values)).sum())
    core = _RwCore(_lift(misfit, state.grid), reg, step_sd)
    core.reset(state.values.copy())
    accepted = core.step(rng)
    return Field(state.grid, core.state), accepted
