"""Minimal standalone SVG line charts: axes, ticks, legend, optional band.

Hand-rolled rather than delegating to a plotting library so that re-running
a command produces byte-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

WIDTH, HEIGHT = 720, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 16, 34, 46
PALETTE = ("#1f5fa8", "#d1342f", "#2b8a3e", "#8d5ac2", "#c77d12", "#3a3a3a")
BAND_FILL = "#9ec4e8"


@dataclass(frozen=True)
class Series:
    label: str
    x: tuple[float, ...]
    y: tuple[float, ...]


@dataclass(frozen=True)
class Band:
    x: tuple[float, ...]
    lo: tuple[float, ...]
    hi: tuple[float, ...]


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def render_line_chart(
    series: list[Series],
    path: str | Path,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    band: Band | None = None,
) -> None:
    if not series or any(len(s.x) == 0 for s in series):
        raise ValueError("cannot render an empty chart")
    xs = [v for s in series for v in s.x]
    ys = [v for s in series for v in s.y]
    if band is not None:
        xs += list(band.x)
        ys += list(band.lo) + list(band.hi)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    iw = WIDTH - MARGIN_L - MARGIN_R
    ih = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (x - x0) / (x1 - x0) * iw

    def py(y: float) -> float:
        return MARGIN_T + (y1 - y) / (y1 - y0) * ih

    out: list[str] = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    out.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{_escape(title)}</text>'
        )
    # gridlines and ticks
    for tx in _nice_ticks(x0, x1):
        x = px(tx)
        out.append(
            f'<line x1="{x:.2f}" y1="{MARGIN_T}" x2="{x:.2f}" y2="{HEIGHT - MARGIN_B}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{HEIGHT - MARGIN_B + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_fmt(tx)}</text>'
        )
    for ty in _nice_ticks(y0, y1):
        y = py(ty)
        out.append(
            f'<line x1="{MARGIN_L}" y1="{y:.2f}" x2="{WIDTH - MARGIN_R}" y2="{y:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{MARGIN_L - 6}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(ty)}</text>'
        )
    # frame
    out.append(
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{iw}" height="{ih}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    if band is not None:
        pts = [f"{px(x):.2f},{py(h):.2f}" for x, h in zip(band.x, band.hi)]
        pts += [f"{px(x):.2f},{py(l):.2f}" for x, l in zip(reversed(band.x), reversed(band.lo))]
        out.append(
            f'<polygon points="{" ".join(pts)}" fill="{BAND_FILL}" fill-opacity="0.45" stroke="none"/>'
        )
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(s.x, s.y))
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.6"/>'
        )
    # legend
    ly = MARGIN_T + 14
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        out.append(
            f'<line x1="{MARGIN_L + 10}" y1="{ly - 4}" x2="{MARGIN_L + 34}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{MARGIN_L + 40}" y="{ly}" font-family="sans-serif" '
            f'font-size="12">{_escape(s.label)}</text>'
        )
        ly += 16
    if xlabel:
        out.append(
            f'<text x="{MARGIN_L + iw / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{_escape(xlabel)}</text>'
        )
    if ylabel:
        out.append(
            f'<text x="16" y="{MARGIN_T + ih / 2:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 16 {MARGIN_T + ih / 2:.1f})">{_escape(ylabel)}</text>'
        )
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
