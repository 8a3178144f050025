"""Log-log line plots written directly as SVG paths."""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

from .errors import DomainError

WIDTH, HEIGHT = 640, 420
MARGIN = (70, 30, 30, 55)  # left, right, top, bottom
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def loglog_svg(
    x: Sequence[float], series: dict[str, Sequence[float]], title: str = "", xlabel: str = "j", ylabel: str = ""
) -> str:
    """SVG text for several positive series against x on log-log axes.

    Nonpositive values cannot be placed on a log axis and are skipped.
    """
    if not x:
        raise DomainError("nothing to plot")
    if any(v <= 0 for v in x):
        raise DomainError("log axis needs positive x values")
    ys = [v for s in series.values() for v in s if v > 0]
    if not ys:
        raise DomainError("no positive values to plot")
    lx0, lx1 = math.log10(min(x)), math.log10(max(x))
    ly0, ly1 = math.floor(math.log10(min(ys))), math.ceil(math.log10(max(ys)))
    if lx1 == lx0:
        lx0, lx1 = lx0 - 0.5, lx1 + 0.5
    if ly1 == ly0:
        ly1 = ly0 + 1
    left, right, top, bottom = MARGIN
    pw, ph = WIDTH - left - right, HEIGHT - top - bottom

    def px(v: float) -> float:
        return left + pw * (math.log10(v) - lx0) / (lx1 - lx0)

    def py(v: float) -> float:
        return top + ph * (1 - (math.log10(v) - ly0) / (ly1 - ly0))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for e in range(int(ly0), int(ly1) + 1):
        y = py(10.0**e)
        out.append(f'<line x1="{left}" y1="{_fmt(y)}" x2="{left + pw}" y2="{_fmt(y)}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 6}" y="{_fmt(y + 4)}" text-anchor="end">1e{e}</text>')
    for v in x:
        out.append(f'<text x="{_fmt(px(v))}" y="{top + ph + 18}" text-anchor="middle">{v:g}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{top + ph / 2}" transform="rotate(-90 16 {top + ph / 2})" '
                   f'text-anchor="middle">{escape(ylabel)}</text>')
    if title:
        out.append(f'<text x="{left + pw / 2}" y="{top - 10}" text-anchor="middle">{escape(title)}</text>')
    for k, (name, values) in enumerate(series.items()):
        color = COLORS[k % len(COLORS)]
        pts = [(px(a), py(b)) for a, b in zip(x, values) if b > 0]
        if pts:
            d = " ".join(("M" if i == 0 else "L") + f"{_fmt(a)},{_fmt(b)}" for i, (a, b) in enumerate(pts))
            out.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="2"/>')
            out += [f'<circle cx="{_fmt(a)}" cy="{_fmt(b)}" r="3" fill="{color}"/>' for a, b in pts]
        ly = top + 16 + 16 * k
        out.append(f'<line x1="{left + pw - 150}" y1="{ly - 4}" x2="{left + pw - 130}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw - 124}" y="{ly}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def convergence_svg(report) -> str:
    """eps_j with its GH and SWIF bounds for a convergence report."""
    js = [r.j for r in report.rows]
    series = {
        "eps_j": [r.eps for r in report.rows],
        "GH bound": [r.gh_bound for r in report.rows],
        "SWIF bound": [r.swif_bound for r in report.rows],
    }
    return loglog_svg(js, series, title=f"{report.family} vs {report.limit}", ylabel="distance")
