"""Uniform 1-D grids, discretized fields, and observation sets.

Everything downstream (covariances, forward models, samplers) works on
these three immutable types. Interpolation is piecewise linear throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of ``n`` points on ``[a, b]`` with spacing ``h = (b-a)/(n-1)``."""

    n: int
    a: float
    b: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"grid needs at least 2 points, got n={self.n}")
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError("grid endpoints must be finite")
        if self.a >= self.b:
            raise ValueError(f"grid requires a < b, got a={self.a}, b={self.b}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n - 1)

    @cached_property
    def points(self) -> np.ndarray:
        """Node coordinates ``t_i = a + i*h``; endpoints are exact."""
        pts = np.linspace(self.a, self.b, self.n)
        pts.setflags(write=False)
        return pts

    def same_domain(self, other: "Grid1D") -> bool:
        return self.a == other.a and self.b == other.b


@dataclass(frozen=True)
class Field:
    """A real-valued function sampled at the nodes of a :class:`Grid1D`."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (self.grid.n,):
            raise ValueError(
                f"field needs {self.grid.n} values, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must all be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class ObservationSet:
    """Measurement coordinates, data vector, and the (scalar) noise level.

    ``locations`` are positions for point observations or times for boundary
    traces; they must be strictly increasing. Noise is i.i.d. N(0, noise_sd^2).
    """

    locations: np.ndarray
    y: np.ndarray
    noise_sd: float

    def __post_init__(self) -> None:
        locs = np.asarray(self.locations, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if locs.ndim != 1 or y.ndim != 1 or locs.shape != y.shape:
            raise ValueError("locations and y must be 1-D vectors of equal length")
        if locs.size > 1 and not np.all(np.diff(locs) > 0):
            raise ValueError("locations must be strictly increasing")
        if not (np.isfinite(self.noise_sd) and self.noise_sd > 0):
            raise ValueError(f"noise_sd must be positive, got {self.noise_sd}")
        if not np.all(np.isfinite(y)):
            raise ValueError("data vector must be finite")
        locs = locs.copy()
        locs.setflags(write=False)
        y = y.copy()
        y.setflags(write=False)
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "y", y)

    @property
    def m(self) -> int:
        return self.y.size


def make_grid(n: int, a: float, b: float) -> Grid1D:
    """Build the uniform grid with ``n`` points on ``[a, b]``."""
    return Grid1D(n=int(n), a=float(a), b=float(b))


def eval_at(field: Field, t: float) -> float:
    """Piecewise-linear interpolation of ``field`` at ``t``; exact at nodes."""
    g = field.grid
    if not (g.a <= t <= g.b):
        raise ValueError(f"t={t} outside grid domain [{g.a}, {g.b}]")
    return float(np.interp(t, g.points, field.values))


def regrid(field: Field, target: Grid1D) -> Field:
    """Linearly interpolate ``field`` onto ``target`` (same domain required).

    Regridding onto the field's own grid reproduces the values bit-for-bit.
    """
    if not field.grid.same_domain(target):
        raise ValueError(
            f"target domain [{target.a}, {target.b}] does not match source "
            f"[{field.grid.a}, {field.grid.b}]"
        )
    return Field(target, np.interp(target.points, field.grid.points, field.values))


def write_field_csv(field: Field, path: str | Path) -> None:
    """Serialize a field as CSV ``t,value`` at full double precision."""
    lines = ["t,value"]
    for t, v in zip(field.grid.points, field.values):
        lines.append(f"{t:.17g},{v:.17g}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_field_csv(path: str | Path) -> Field:
    """Read a field written by :func:`write_field_csv`; grid is inferred."""
    rows = _read_csv_rows(path, expected_header="t,value")
    t = np.array([r[0] for r in rows])
    v = np.array([r[1] for r in rows])
    if t.size < 2:
        raise ValueError(f"{path}: need at least 2 rows to infer a grid")
    return Field(make_grid(t.size, t[0], t[-1]), v)


def write_observations_csv(obs: ObservationSet, path: str | Path) -> None:
    """Serialize observations as CSV ``location,y`` with a noise_sd comment."""
    lines = [f"# noise_sd={obs.noise_sd:.17g}", "location,y"]
    for loc, val in zip(obs.locations, obs.y):
        lines.append(f"{loc:.17g},{val:.17g}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_observations_csv(path: str | Path) -> ObservationSet:
    text = Path(path).read_text(encoding="utf-8")
    noise_sd = None
    for line in text.splitlines():
        if line.startswith("# noise_sd="):
            noise_sd = float(line.split("=", 1)[1])
            break
    if noise_sd is None:
        raise ValueError(f"{path}: missing '# noise_sd=' comment line")
    rows = _read_csv_rows(path, expected_header="location,y")
    locs = np.array([r[0] for r in rows])
    y = np.array([r[1] for r in rows])
    return ObservationSet(locs, y, noise_sd)


def _read_csv_rows(path: str | Path, expected_header: str) -> list[list[float]]:
    lines = [
        ln
        for ln in Path(path).read_text(encoding="utf-8").splitlines()
        if ln and not ln.startswith("#")
    ]
    if not lines or lines[0] != expected_header:
        raise ValueError(f"{path}: expected header '{expected_header}'")
    return [[float(x) for x in ln.split(",")] for ln in lines[1:]]
