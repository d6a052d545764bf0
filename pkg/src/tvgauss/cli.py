"""Experiment driver CLI.

Subcommands: ``generate`` (synthetic truth + observations), ``sample`` (run an
MCMC chain and export summaries/diagnostics), ``gp-exact`` (analytic GP
posterior), ``mesh-study`` (same inference across grid resolutions), and
``render`` (CSV -> standalone SVG line charts; the chart kind is inferred
from the CSV header).

Every command is deterministic given (config, input files, seed): re-running
produces byte-identical outputs. Each output directory receives a copy of
the fully resolved config. Errors exit nonzero with a single
``error: <Type>: <message>`` line on stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import experiments as exp
from .config import ExperimentConfig, echo_config, load_config
from .diagnostics import acf, ess, summarize
from .forward import ForwardModel, generate_data
from .gaussian import (
    CholeskyFactor,
    SqExpKernel,
    build_covariance,
    factor,
    gp_posterior_exact,
)
from .grid import (
    Field,
    Grid1D,
    ObservationSet,
    make_grid,
    read_observations_csv,
    write_field_csv,
    write_observations_csv,
)
from .potentials import TVTerm
from .samplers import ChainOutput, PosteriorProblem, SamplerConfig, run_chain
from .svgplot import Band, Series, render_line_chart


def _problem_grid(cfg: ExperimentConfig, n: int | None = None) -> Grid1D:
    # both benchmark problems live on a unit interval (space or time)
    return make_grid(n if n is not None else cfg.n, 0.0, 1.0)


def _truth(cfg: ExperimentConfig, grid: Grid1D) -> Field:
    if cfg.problem == "heat-robin":
        return exp.robin_truth(grid)
    return exp.denoising_truth(grid)


def _model(cfg: ExperimentConfig, grid: Grid1D) -> ForwardModel:
    if cfg.problem == "heat-robin":
        return exp.build_heat_model(
            cfg.nx, cfg.nt, cfg.obs_count, outward_sign_at_L=cfg.boundary_sign == "outward"
        )
    return exp.build_denoising_model(grid, cfg.obs_count)


def _factor(cfg: ExperimentConfig, grid: Grid1D) -> CholeskyFactor:
    return factor(build_covariance(SqExpKernel(cfg.gamma, cfg.d), grid))


def _initial_state(cfg: ExperimentConfig, grid: Grid1D, fac: CholeskyFactor | None) -> Field:
    if cfg.init == "prior":
        rng = np.random.default_rng((cfg.seed, 0x1217))
        if fac is not None:
            return Field(grid, fac.lower @ rng.standard_normal(grid.n))
        # rw-tv chains start from a TV-prior-scale increment draw; a constant
        # start is the global TV minimum and rejects every proposal
        return exp.tv_prior_draw(grid, cfg.lam, rng)
    return Field(grid, np.zeros(grid.n))


def _sampler_config(cfg: ExperimentConfig, n: int | None = None, seed: int | None = None) -> SamplerConfig:
    grid_n = n if n is not None else cfg.n
    step_sd = cfg.step_sd if cfg.step_sd > 0 else 1.0 / (cfg.lam * grid_n**0.5)
    return SamplerConfig(
        n_samples=cfg.n_samples,
        beta=cfg.beta,
        k=cfg.k,
        burn_in=cfg.burn_in,
        thin=cfg.thin,
        seed=seed if seed is not None else cfg.seed,
        step_sd=step_sd,
    )


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


def _echo(cfg: ExperimentConfig, out: Path) -> None:
    _write(out / "config_echo.txt", echo_config(cfg))


def _csv(header: str, rows) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def cmd_generate(args) -> None:
    cfg = load_config(args.config, args.seed)
    out = _out_dir(args)
    grid = _problem_grid(cfg)
    truth = _truth(cfg, grid)
    model = _model(cfg, grid)
    rng = np.random.default_rng((cfg.seed, 0xDA7A))
    obs = generate_data(model, truth, cfg.sigma, rng)
    write_field_csv(truth, out / "truth.csv")
    write_observations_csv(obs, out / "observations.csv")
    if cfg.problem == "heat-robin":
        # the clean boundary trace, for figure reproduction
        clean = model.apply(truth)
        _write(out / "clean_trace.csv", _csv("t,value", zip(obs.locations, clean)))
    _echo(cfg, out)


def _build_problem(cfg: ExperimentConfig, grid: Grid1D, obs: ObservationSet):
    model = _model(cfg, grid)
    tv = TVTerm(cfg.lam)
    if cfg.sampler == "rw-tv":
        return PosteriorProblem(model=model, obs=obs, tv=tv, factor=None), None
    fac = _factor(cfg, grid)
    return PosteriorProblem(model=model, obs=obs, tv=tv, factor=fac), fac


def cmd_sample(args) -> None:
    cfg = load_config(args.config, args.seed)
    if not cfg.data_dir:
        raise ValueError("config key 'data_dir' must point at a generate output directory")
    out = _out_dir(args)
    obs = read_observations_csv(Path(cfg.data_dir) / "observations.csv")
    if obs.m != cfg.obs_count:
        raise ValueError(
            f"data file has {obs.m} observations but config expects {cfg.obs_count}"
        )
    grid = _problem_grid(cfg)
    problem, fac = _build_problem(cfg, grid, obs)
    initial = _initial_state(cfg, grid, fac)
    probes = exp.probe_indices(grid, cfg.probe_times)
    output = run_chain(cfg.sampler, initial, _sampler_config(cfg), problem, probes)
    _export_chain(cfg, grid, output, out)
    _echo(cfg, out)


def _export_chain(cfg: ExperimentConfig, grid: Grid1D, output: ChainOutput, out: Path) -> None:
    n_stored = output.samples.shape[0]
    lines = [
        f"# thinned samples: one row per stored state, columns = grid nodes "
        f"(n={grid.n}, a={grid.a:.17g}, b={grid.b:.17g})"
    ]
    for row in output.samples:
        lines.append(",".join(f"{v:.10g}" for v in row))
    _write(out / "samples.csv", "\n".join(lines) + "\n")

    stats = output.stats
    _write(
        out / "stats.txt",
        "\n".join(
            [
                f"outer_accept_rate={stats.outer_accept_rate:.6f}",
                f"inner_accept_rate={stats.inner_accept_rate:.6f}",
                f"forward_evals={stats.forward_evals}",
                f"outer_proposed={stats.outer_proposed}",
                f"outer_accepted={stats.outer_accepted}",
                f"inner_proposed={stats.inner_proposed}",
                f"inner_accepted={stats.inner_accepted}",
            ]
        )
        + "\n",
    )

    if n_stored >= 40:
        summ = summarize(output)
        _write(
            out / "summary.csv",
            _csv(
                "t,mean,sd,ci_lo,ci_hi",
                zip(
                    grid.points,
                    summ.mean.values,
                    summ.sd.values,
                    summ.ci_lo.values,
                    summ.ci_hi.values,
                ),
            ),
        )
    else:
        print(
            f"note: only {n_stored} stored samples; skipping summary.csv (needs 40)",
            file=sys.stderr,
        )

    # probe-node diagnostics at full chain resolution
    for idx, p in zip(output.probe_indices, cfg.probe_times):
        series = output.probe_series[:, list(output.probe_indices).index(idx)]
        tag = f"{p:g}"
        _write(
            out / f"trace_t{tag}.csv",
            _csv("step,value", zip(range(1, series.size + 1), series)),
        )
        if series.size >= 2 and np.ptp(series) > 0:
            max_lag = min(cfg.acf_max_lag, series.size - 1)
            rho = acf(series, max_lag)
            _write(out / f"acf_t{tag}.csv", _csv("lag,rho", zip(range(max_lag + 1), rho)))

    # per-node ESS and lag-100 ACF from the thinned samples
    if n_stored >= 8:
        lag_eff = max(1, round(100 / cfg.thin))
        rows = []
        for j in range(grid.n):
            series = output.samples[:, j]
            if np.ptp(series) == 0:
                continue
            rho = acf(series, min(lag_eff, n_stored - 1))
            rows.append((grid.points[j], ess(series), rho[min(lag_eff, n_stored - 1)]))
        if rows:
            _write(out / "ess.csv", _csv("t,ess,acf_lag100", rows))


def cmd_gp_exact(args) -> None:
    cfg = load_config(args.config, args.seed)
    if not cfg.data_dir:
        raise ValueError("config key 'data_dir' must point at a generate output directory")
    out = _out_dir(args)
    obs = read_observations_csv(Path(cfg.data_dir) / "observations.csv")
    grid = _problem_grid(cfg)
    for d in cfg.resolved_gp_d_values:
        mean, sd = gp_posterior_exact(SqExpKernel(cfg.gamma, d), grid, obs)
        _write(
            out / f"gp_exact_d{d:g}.csv",
            _csv("t,mean,sd", zip(grid.points, mean.values, sd.values)),
        )
    _echo(cfg, out)


def cmd_mesh_study(args) -> None:
    cfg = load_config(args.config, args.seed)
    out = _out_dir(args)
    n_list = sorted(cfg.mesh_n_list)
    if len(n_list) < 2:
        raise ValueError("mesh_n_list needs at least 2 grid sizes")
    finest = make_grid(n_list[-1], 0.0, 1.0)

    # one fixed data set shared by every resolution
    data_grid = _problem_grid(cfg, n_list[-1])
    data_model = _model(cfg, data_grid)
    obs = generate_data(
        data_model, _truth(cfg, data_grid), cfg.sigma, np.random.default_rng((cfg.seed, 0xDA7A))
    )
    write_observations_csv(obs, out / "observations.csv")

    report: list[str] = []
    max_by_prior: dict[str, float] = {}
    for prior in cfg.mesh_priors:
        means: dict[int, Field] = {}
        for n in n_list:
            grid = make_grid(n, 0.0, 1.0)
            model = _model(cfg, grid)
            tv = TVTerm(cfg.lam)
            if prior == "tg":
                fac = _factor(cfg, grid)
                problem = PosteriorProblem(model=model, obs=obs, tv=tv, factor=fac)
                kind = cfg.sampler if cfg.sampler != "rw-tv" else "spcn"
            else:
                fac = None
                problem = PosteriorProblem(model=model, obs=obs, tv=tv, factor=None)
                kind = "rw-tv"
            scfg = _sampler_config(cfg, n=n, seed=cfg.seed + n)
            initial = _initial_state(cfg, grid, fac)
            output = run_chain(kind, initial, scfg, problem)
            means[n] = output.mean
            _write(
                out / f"mean_{prior}_N{n}.csv",
                _csv("t,value", zip(grid.points, output.mean.values)),
            )
            report.append(
                f"{prior} N={n} outer_accept_rate={output.stats.outer_accept_rate:.4f}"
            )
        from .grid import regrid

        sup = 0.0
        for i, n1 in enumerate(n_list):
            for n2 in n_list[i + 1 :]:
                diff = float(
                    np.max(
                        np.abs(
                            regrid(means[n1], finest).values
                            - regrid(means[n2], finest).values
                        )
                    )
                )
                sup = max(sup, diff)
                report.append(f"{prior} supdiff N{n1}-N{n2} = {diff:.6f}")
        max_by_prior[prior] = sup
        report.append(f"{prior} max_supdiff = {sup:.6f}")
    if {"tg", "tv"} <= set(max_by_prior):
        report.append(
            f"tv_exceeds_tg = {'yes' if max_by_prior['tv'] > max_by_prior['tg'] else 'no'}"
        )
    _write(out / "report.txt", "\n".join(report) + "\n")
    _echo(cfg, out)


# ---------------------------------------------------------------- render ---

_RENDER_KINDS = {
    ("t", "value"): ("t", "line"),
    ("step", "value"): ("step", "trace"),
    ("t", "mean", "sd"): ("t", "mean_sd"),
    ("t", "mean", "sd", "ci_lo", "ci_hi"): ("t", "summary"),
    ("lag", "rho"): ("lag", "acf"),
    ("t", "ess", "acf_lag100"): ("t", "ess"),
}


def _read_csv_table(path: Path) -> tuple[tuple[str, ...], np.ndarray]:
    lines = [
        ln
        for ln in path.read_text(encoding="utf-8").splitlines()
        if ln.strip() and not ln.startswith("#")
    ]
    if not lines:
        raise ValueError(f"{path}: empty CSV")
    header = tuple(h.strip() for h in lines[0].split(","))
    if len(lines) == 1:
        raise ValueError(f"{path}: CSV has a header but no data rows")
    data = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: row width does not match header")
    return header, data


def cmd_render(args) -> None:
    paths = [Path(p) for p in args.inputs]
    if not paths:
        raise ValueError("render needs at least one input CSV")
    out = _out_dir(args)
    tables = []
    xlabel = None
    for p in paths:
        header, data = _read_csv_table(p)
        if header not in _RENDER_KINDS:
            raise ValueError(f"{p}: unrecognized CSV header {','.join(header)}")
        x_col, chart = _RENDER_KINDS[header]
        if xlabel is None:
            xlabel = x_col
        elif x_col != xlabel:
            raise ValueError(
                f"render inputs must share the x column; got '{x_col}' after '{xlabel}'"
            )
        tables.append((p.stem, chart, data))

    series: list[Series] = []
    band = None
    for stem, chart, data in tables:
        x = tuple(data[:, 0])
        label = f"{stem} mean" if chart in ("mean_sd", "summary") else stem
        series.append(Series(label, x, tuple(data[:, 1])))
        if band is None and len(tables) == 1:
            if chart == "summary":
                band = Band(x, tuple(data[:, 3]), tuple(data[:, 4]))
            elif chart == "mean_sd":
                band = Band(
                    x,
                    tuple(data[:, 1] - 2 * data[:, 2]),
                    tuple(data[:, 1] + 2 * data[:, 2]),
                )
    ylabels = {
        "line": "value",
        "trace": "value",
        "acf": "autocorrelation",
        "mean_sd": "mean",
        "summary": "mean",
        "ess": "effective sample size",
    }
    target = out / (paths[0].stem + ".svg")
    render_line_chart(
        series,
        target,
        title=args.title or paths[0].stem,
        xlabel=xlabel,
        ylabel=ylabels[tables[0][1]],
        band=band,
    )
    if args.config:
        _echo(load_config(args.config, args.seed), out)
    print(target)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tvgauss",
        description="TV-Gaussian Bayesian inversion experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="key=value config file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="overrides the config seed")

    p = sub.add_parser("generate", help="write synthetic truth and observations")
    add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sample", help="run an MCMC chain and export diagnostics")
    add_common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("gp-exact", help="analytic GP posterior on the data")
    add_common(p)
    p.set_defaults(func=cmd_gp_exact)

    p = sub.add_parser("mesh-study", help="same inference across grid resolutions")
    add_common(p)
    p.set_defaults(func=cmd_mesh_study)

    p = sub.add_parser("render", help="render CSV outputs as SVG line charts")
    add_common(p, config_required=False)
    p.add_argument("inputs", nargs="+", help="input CSV files (one shared schema)")
    p.add_argument("--title", default="", help="chart title")
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except Exception as exc:  # noqa: BLE001 - single-line machine-parsable errors
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
