"""Self-contained SVG scatter of mean crossings against n on log-log axes."""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT, PAD = 640, 480, 60
_MARKERS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def emit_scatter(rows: Sequence, title: str = "mean crossings vs n") -> str:
    """SVG with one circle per ``(n, mean[, series])`` row and the y = sqrt(n) path.

    Rows with a non-positive mean cannot sit on a log axis and are dropped;
    at least two plottable rows are required.
    """
    pts = []
    for r in rows:
        n, mean = float(r[0]), float(r[1])
        series = str(r[2]) if len(r) > 2 else ""
        if n > 0 and mean > 0:
            pts.append((n, mean, series))
    if len(pts) < 2:
        raise ValueError("a scatter needs at least two rows with positive n and mean")
    ns = [p[0] for p in pts]
    lo_n, hi_n = min(ns), max(ns)
    if lo_n == hi_n:
        lo_n, hi_n = lo_n / 2, hi_n * 2
    ys = [p[1] for p in pts] + [math.sqrt(lo_n), math.sqrt(hi_n)]
    lx0, lx1 = math.log10(lo_n), math.log10(hi_n)
    ly0, ly1 = math.log10(min(ys)), math.log10(max(ys))
    if ly0 == ly1:
        ly0, ly1 = ly0 - 0.5, ly1 + 0.5

    def sx(n):
        return PAD + (math.log10(n) - lx0) / (lx1 - lx0) * (WIDTH - 2 * PAD)

    def sy(y):
        return HEIGHT - PAD - (math.log10(y) - ly0) / (ly1 - ly0) * (HEIGHT - 2 * PAD)

    series = sorted({p[2] for p in pts})
    colour = {s: _MARKERS[i % len(_MARKERS)] for i, s in enumerate(series)}
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{PAD}" y1="{HEIGHT - PAD}" x2="{WIDTH - PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
        f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle" font-size="14">n (log scale)</text>',
        f'<text x="15" y="{HEIGHT / 2:.1f}" text-anchor="middle" font-size="14" transform="rotate(-90 15 {HEIGHT / 2:.1f})">mean crossings (log scale)</text>',
    ]
    steps = 32
    ref = []
    for i in range(steps + 1):
        n = 10 ** (lx0 + (lx1 - lx0) * i / steps)
        ref.append(f"{'M' if i == 0 else 'L'}{sx(n):.2f},{sy(math.sqrt(n)):.2f}")
    out.append(f'<path class="reference" d="{" ".join(ref)}" fill="none" stroke="gray" stroke-dasharray="6,4"/>')
    for n, mean, s in pts:
        out.append(f'<circle class="point" cx="{sx(n):.2f}" cy="{sy(mean):.2f}" r="4" fill="{colour[s]}"><title>{escape(s)} n={n:g} mean={mean:.4g}</title></circle>')
    for i, s in enumerate(series):
        if s:
            y = PAD + 18 * i
            out.append(f'<circle cx="{WIDTH - PAD - 100}" cy="{y}" r="4" fill="{colour[s]}" class="legend"/>')
            out.append(f'<text x="{WIDTH - PAD - 90}" y="{y + 4}" font-size="12">{escape(s)}</text>')
    out.append(f'<text x="{WIDTH - PAD}" y="{PAD - 20}" text-anchor="end" font-size="12">dashed: y = sqrt(n)</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
