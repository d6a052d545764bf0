import numpy as np
import pytest

from tvgauss.cli import main
from tvgauss.config import ExperimentConfig, parse_config_text, resolve_config


def write_config(tmp_path, text, name="exp.cfg"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


# ----------------------------------------------------------------- config


def test_config_defaults_per_problem():
    cfg = resolve_config({"problem": "heat-robin"})
    assert cfg.n == 200
    assert cfg.lam == 100.0
    assert cfg.sampler == "spcn"
    assert cfg.obs_count == 100
    den = resolve_config({})
    assert den.n == 89
    assert den.lam == 500.0
    assert den.obs_count == 23
    tv = resolve_config({"problem": "tv-denoising"})
    assert tv.sampler == "rw-tv"


def test_config_rejects_unknown_and_duplicate_keys():
    with pytest.raises(ValueError):
        parse_config_text("no_such_key = 3")
    with pytest.raises(ValueError):
        parse_config_text("n = 3\nn = 4")
    with pytest.raises(ValueError):
        parse_config_text("just a line")


def test_config_comments_and_seed_override():
    raw = parse_config_text("# a comment\nproblem = denoising\nseed = 4  # trailing\n")
    cfg = resolve_config(raw, seed_override=99)
    assert cfg.seed == 99


def test_config_auto_step_sd():
    cfg = resolve_config({"problem": "tv-denoising", "n": "100"})
    assert cfg.resolved_step_sd == pytest.approx(1.0 / (500.0 * 10.0))
    cfg2 = resolve_config({"problem": "tv-denoising", "step_sd": "0.5"})
    assert cfg2.resolved_step_sd == 0.5


def test_config_validation_errors():
    with pytest.raises(ValueError):
        ExperimentConfig(problem="nope")
    with pytest.raises(ValueError):
        ExperimentConfig(sampler="gibbs")
    with pytest.raises(ValueError):
        ExperimentConfig(gamma=-1.0)
    with pytest.raises(ValueError):
        ExperimentConfig(mesh_priors=("besov",))


# --------------------------------------------------------------- generate


def test_generate_denoising_writes_23_observations(tmp_path):
    cfg = write_config(tmp_path, "problem = denoising\nseed = 1\n")
    out = tmp_path / "data"
    assert main(["generate", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "observations.csv").read_text().splitlines()
    assert lines[0].startswith("# noise_sd=")
    assert lines[1] == "location,y"
    assert len(lines) == 2 + 23
    assert (out / "truth.csv").exists()
    assert (out / "config_echo.txt").exists()


def test_generate_heat_robin_writes_100_observations(tmp_path):
    cfg = write_config(tmp_path, "problem = heat-robin\nseed = 1\n")
    out = tmp_path / "data"
    assert main(["generate", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "observations.csv").read_text().splitlines()
    assert len(lines) == 2 + 100
    assert (out / "clean_trace.csv").exists()


def test_generate_is_byte_deterministic(tmp_path):
    cfg = write_config(tmp_path, "problem = denoising\nseed = 11\n")
    out1, out2 = tmp_path / "a", tmp_path / "b"
    main(["generate", "--config", cfg, "--out", str(out1)])
    main(["generate", "--config", cfg, "--out", str(out2)])
    for name in ("truth.csv", "observations.csv", "config_echo.txt"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


# ----------------------------------------------------------------- sample


@pytest.fixture()
def denoising_data(tmp_path):
    cfg = write_config(tmp_path, "problem = denoising\nseed = 5\n", name="gen.cfg")
    data = tmp_path / "data"
    main(["generate", "--config", cfg, "--out", str(data)])
    return data


def test_sample_tiny_run_row_count(tmp_path, denoising_data):
    cfg = write_config(
        tmp_path,
        f"problem = denoising\nseed = 5\ndata_dir = {denoising_data}\n"
        "sampler = spcn\nbeta = 0.01\nn_samples = 10\nburn_in = 0\nthin = 1\n",
    )
    out = tmp_path / "run"
    assert main(["sample", "--config", cfg, "--out", str(out)]) == 0
    lines = [
        ln for ln in (out / "samples.csv").read_text().splitlines() if not ln.startswith("#")
    ]
    assert len(lines) == 10
    stats = dict(
        ln.split("=") for ln in (out / "stats.txt").read_text().splitlines()
    )
    assert int(stats["forward_evals"]) == 10
    assert 0.0 <= float(stats["outer_accept_rate"]) <= 1.0


def test_sample_exports_summary_and_diagnostics(tmp_path, denoising_data):
    cfg = write_config(
        tmp_path,
        f"problem = denoising\nseed = 5\ndata_dir = {denoising_data}\n"
        "sampler = spcn\nbeta = 0.01\nn_samples = 400\nburn_in = 50\nthin = 10\n"
        "probe_times = 0.2,0.5,0.8\nacf_max_lag = 50\n",
    )
    out = tmp_path / "run"
    assert main(["sample", "--config", cfg, "--out", str(out)]) == 0
    summary = (out / "summary.csv").read_text().splitlines()
    assert summary[0] == "t,mean,sd,ci_lo,ci_hi"
    assert len(summary) == 1 + 89
    assert (out / "trace_t0.5.csv").exists()
    assert (out / "acf_t0.5.csv").read_text().splitlines()[0] == "lag,rho"
    ess_lines = (out / "ess.csv").read_text().splitlines()
    assert ess_lines[0] == "t,ess,acf_lag100"


def test_sample_rejects_missing_data_dir(tmp_path):
    cfg = write_config(tmp_path, "problem = denoising\nn_samples = 10\n")
    assert main(["sample", "--config", cfg, "--out", str(tmp_path / "x")]) == 1


def test_sample_rejects_mismatched_obs_count(tmp_path, denoising_data, capsys):
    cfg = write_config(
        tmp_path,
        f"problem = denoising\ndata_dir = {denoising_data}\nobs_count = 7\nn_samples = 10\n",
    )
    assert main(["sample", "--config", cfg, "--out", str(tmp_path / "x")]) == 1
    assert capsys.readouterr().err.startswith("error: ")


# --------------------------------------------------------------- gp-exact


def test_gp_exact_writes_one_csv_per_d(tmp_path, denoising_data):
    cfg = write_config(
        tmp_path,
        f"problem = denoising\ndata_dir = {denoising_data}\n"
        "gp_d_values = 0.04,0.08,0.16\n",
    )
    out = tmp_path / "gp"
    assert main(["gp-exact", "--config", cfg, "--out", str(out)]) == 0
    for d in ("0.04", "0.08", "0.16"):
        lines = (out / f"gp_exact_d{d}.csv").read_text().splitlines()
        assert lines[0] == "t,mean,sd"
        assert len(lines) == 1 + 89


def test_gp_exact_empty_observations_gives_zero_mean(tmp_path):
    data = tmp_path / "data"
    data.mkdir()
    (data / "observations.csv").write_text("# noise_sd=0.02\nlocation,y\n")
    cfg = write_config(tmp_path, f"problem = denoising\ndata_dir = {data}\nobs_count = 0\n")
    out = tmp_path / "gp"
    assert main(["gp-exact", "--config", cfg, "--out", str(out)]) == 0
    rows = (out / "gp_exact_d0.02.csv").read_text().splitlines()[1:]
    means = np.array([float(r.split(",")[1]) for r in rows])
    assert np.all(means == 0.0)


# -------------------------------------------------------------- mesh-study


def test_mesh_study_reports_pairwise_diffs(tmp_path):
    cfg = write_config(
        tmp_path,
        "problem = denoising\nseed = 3\nsampler = spcn\nbeta = 0.01\n"
        "n_samples = 1500\nburn_in = 100\nthin = 50\n"
        "mesh_n_list = 23,45\nmesh_priors = tg,tv\n",
    )
    out = tmp_path / "mesh"
    assert main(["mesh-study", "--config", cfg, "--out", str(out)]) == 0
    report = (out / "report.txt").read_text()
    assert "tg supdiff N23-N45" in report
    assert "tv supdiff N23-N45" in report
    assert "tv_exceeds_tg" in report
    assert (out / "mean_tg_N23.csv").exists()
    assert (out / "mean_tv_N45.csv").exists()


def test_mesh_study_rejects_single_grid(tmp_path):
    cfg = write_config(tmp_path, "problem = denoising\nmesh_n_list = 89\nn_samples = 10\n")
    assert main(["mesh-study", "--config", cfg, "--out", str(tmp_path / "m")]) == 1


# ----------------------------------------------------------------- render


def test_render_summary_band(tmp_path, denoising_data):
    cfg = write_config(
        tmp_path,
        f"problem = denoising\nseed = 5\ndata_dir = {denoising_data}\n"
        "sampler = spcn\nbeta = 0.01\nn_samples = 400\nburn_in = 0\nthin = 10\n",
    )
    run = tmp_path / "run"
    main(["sample", "--config", cfg, "--out", str(run)])
    out = tmp_path / "figs"
    assert main(["render", "--out", str(out), str(run / "summary.csv")]) == 0
    svg = (out / "summary.svg").read_text()
    assert svg.startswith("<svg ")
    assert "polygon" in svg  # credible band present


def test_render_overlays_multiple_line_csvs(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    a.write_text("t,value\n0,0\n0.5,1\n1,0\n")
    b.write_text("t,value\n0,1\n0.5,0\n1,1\n")
    out = tmp_path / "figs"
    assert main(["render", "--out", str(out), str(a), str(b)]) == 0
    svg = (out / "a.svg").read_text()
    assert svg.count("<polyline") == 2


def test_render_is_byte_deterministic(tmp_path):
    a = tmp_path / "a.csv"
    a.write_text("lag,rho\n0,1\n1,0.8\n2,0.5\n")
    out1, out2 = tmp_path / "f1", tmp_path / "f2"
    main(["render", "--out", str(out1), str(a)])
    main(["render", "--out", str(out2), str(a)])
    assert (out1 / "a.svg").read_bytes() == (out2 / "a.svg").read_bytes()


def test_render_rejects_empty_csv(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("t,value\n")
    out = tmp_path / "figs"
    assert main(["render", "--out", str(out), str(empty)]) == 1
    assert not (out / "empty.svg").exists()
    assert capsys.readouterr().err.startswith("error: ")


def test_render_rejects_unknown_header(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("foo,bar\n1,2\n")
    assert main(["render", "--out", str(tmp_path / "f"), str(bad)]) == 1


def test_render_mixes_t_keyed_schemas(tmp_path):
    # truth over a GP-mean overlay, as in the denoising comparison figure
    a = tmp_path / "truth.csv"
    a.write_text("t,value\n0,0\n0.5,1\n1,0\n")
    b = tmp_path / "gp.csv"
    b.write_text("t,mean,sd\n0,0.1,0.02\n0.5,0.9,0.02\n1,0.1,0.02\n")
    out = tmp_path / "figs"
    assert main(["render", "--out", str(out), str(a), str(b)]) == 0
    assert (out / "truth.svg").exists()


def test_render_rejects_mixed_x_columns(tmp_path):
    a = tmp_path / "a.csv"
    a.write_text("t,value\n0,0\n1,1\n")
    b = tmp_path / "b.csv"
    b.write_text("lag,rho\n0,1\n1,0.5\n")
    assert main(["render", "--out", str(tmp_path / "f"), str(a), str(b)]) == 1


def test_cli_reports_missing_config(tmp_path, capsys):
    assert main(["generate", "--config", str(tmp_path / "nope.cfg"),
                 "--out", str(tmp_path / "o")]) == 1
    assert "error: " in capsys.readouterr().err
