"""Flat key=value experiment configuration.

A config file holds one ``key = value`` pair per line; ``#`` starts a
comment. Unknown keys are rejected. Every key has a per-problem default, so
a minimal file is just ``problem = heat-robin``. The fully resolved config is
echoed into every output directory, which makes runs reproducible and
diffable.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from . import experiments as exp

PROBLEMS = ("denoising", "heat-robin", "tv-denoising")
SAMPLERS = ("pcn", "spcn", "rw-tv")
BOUNDARY_SIGNS = ("outward", "printed")
INITS = ("prior", "zero")


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str = "denoising"
    n: int = exp.DENOISING_N
    gamma: float = exp.DENOISING_GAMMA
    d: float = exp.DENOISING_D
    lam: float = exp.DENOISING_LAMBDA
    sigma: float = exp.DENOISING_SIGMA
    obs_count: int = exp.DENOISING_OBS_COUNT
    sampler: str = "pcn"
    beta: float = 0.02
    k: int = 10
    n_samples: int = 200_000
    burn_in: int = 50_000
    thin: int = 20
    seed: int = 1
    step_sd: float = 0.0  # 0 means auto: 1 / (lambda * sqrt(n))
    init: str = "prior"
    nx: int = exp.HEAT_NX
    nt: int = exp.HEAT_NT
    boundary_sign: str = "outward"
    probe_times: tuple[float, ...] = exp.PROBE_TIMES
    data_dir: str = ""
    mesh_n_list: tuple[int, ...] = (89, 177, 353)
    mesh_priors: tuple[str, ...] = ("tg",)
    gp_d_values: tuple[float, ...] = ()
    acf_max_lag: int = 200

    def __post_init__(self) -> None:
        if self.problem not in PROBLEMS:
            raise ValueError(f"problem must be one of {PROBLEMS}, got '{self.problem}'")
        if self.sampler not in SAMPLERS:
            raise ValueError(f"sampler must be one of {SAMPLERS}, got '{self.sampler}'")
        if self.boundary_sign not in BOUNDARY_SIGNS:
            raise ValueError(f"boundary_sign must be one of {BOUNDARY_SIGNS}")
        if self.init not in INITS:
            raise ValueError(f"init must be one of {INITS}")
        for name in ("gamma", "d", "lam", "sigma"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.n < 2 or self.obs_count < 0 or self.acf_max_lag < 1:
            raise ValueError("n must be >= 2, obs_count >= 0, acf_max_lag >= 1")
        if len(self.mesh_n_list) < 1 or any(n < 2 for n in self.mesh_n_list):
            raise ValueError("mesh_n_list entries must be >= 2")
        if any(p not in ("tg", "tv") for p in self.mesh_priors):
            raise ValueError("mesh_priors entries must be 'tg' or 'tv'")

    @property
    def resolved_step_sd(self) -> float:
        """Random-walk proposal scale; auto-scaled to keep the TV term's
        per-move fluctuation O(1) when not set explicitly."""
        if self.step_sd > 0:
            return self.step_sd
        return 1.0 / (self.lam * self.n**0.5)

    @property
    def resolved_gp_d_values(self) -> tuple[float, ...]:
        return self.gp_d_values if self.gp_d_values else (self.d,)


# file key -> (attribute, parser)
def _parse_bool_free_floats(s: str) -> tuple[float, ...]:
    return tuple(float(x) for x in s.split(",") if x.strip())


def _parse_ints(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(",") if x.strip())


def _parse_strs(s: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in s.split(",") if x.strip())


_KEYS = {
    "problem": ("problem", str),
    "n": ("n", int),
    "gamma": ("gamma", float),
    "d": ("d", float),
    "lambda": ("lam", float),
    "sigma": ("sigma", float),
    "obs_count": ("obs_count", int),
    "sampler": ("sampler", str),
    "beta": ("beta", float),
    "k": ("k", int),
    "n_samples": ("n_samples", int),
    "burn_in": ("burn_in", int),
    "thin": ("thin", int),
    "seed": ("seed", int),
    "step_sd": ("step_sd", float),
    "init": ("init", str),
    "nx": ("nx", int),
    "nt": ("nt", int),
    "boundary_sign": ("boundary_sign", str),
    "probe_times": ("probe_times", _parse_bool_free_floats),
    "data_dir": ("data_dir", str),
    "mesh_n_list": ("mesh_n_list", _parse_ints),
    "mesh_priors": ("mesh_priors", _parse_strs),
    "gp_d_values": ("gp_d_values", _parse_bool_free_floats),
    "acf_max_lag": ("acf_max_lag", int),
}

_ATTR_TO_KEY = {attr: key for key, (attr, _) in _KEYS.items()}

# keys whose default depends on the problem kind (applied unless set in file)
_PROBLEM_DEFAULTS: dict[str, dict[str, object]] = {
    "denoising": {},
    "tv-denoising": {"sampler": "rw-tv"},
    "heat-robin": {
        "n": exp.HEAT_N,
        "d": exp.HEAT_D,
        "lam": exp.HEAT_LAMBDA,
        "sigma": exp.HEAT_SIGMA,
        "obs_count": exp.HEAT_OBS_COUNT,
        "sampler": "spcn",
    },
}


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{source}:{lineno}: expected 'key = value', got '{line}'")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _KEYS:
            raise ValueError(f"{source}:{lineno}: unknown config key '{key}'")
        if key in raw:
            raise ValueError(f"{source}:{lineno}: duplicate config key '{key}'")
        raw[key] = value
    return raw


def resolve_config(raw: dict[str, str], seed_override: int | None = None) -> ExperimentConfig:
    problem = raw.get("problem", "denoising")
    values: dict[str, object] = dict(_PROBLEM_DEFAULTS.get(problem, {}))
    for key, text in raw.items():
        attr, parser = _KEYS[key]
        try:
            values[attr] = parser(text)
        except ValueError as exc:
            raise ValueError(f"config key '{key}': cannot parse '{text}'") from exc
    cfg = ExperimentConfig(**values)
    if seed_override is not None:
        cfg = replace(cfg, seed=seed_override)
    return cfg


def load_config(path: str | Path, seed_override: int | None = None) -> ExperimentConfig:
    text = Path(path).read_text(encoding="utf-8")
    return resolve_config(parse_config_text(text, source=str(path)), seed_override)


def echo_config(cfg: ExperimentConfig) -> str:
    """Fully resolved config as sorted key=value lines (written to every
    output directory)."""
    lines = []
    for f in sorted(fields(cfg), key=lambda f: _ATTR_TO_KEY[f.name]):
        value = getattr(cfg, f.name)
        key = _ATTR_TO_KEY[f.name]
        if isinstance(value, tuple):
            text = ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"
