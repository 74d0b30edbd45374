"""Minimal static SVG line plots (no plotting dependency).

Produces a fixed-size vector figure with axes, ticks and one or more
polylines; enough for the dispersion and profile figures the CLI emits.
"""

__all__ = ["line_plot"]

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 64, 16, 28, 44


def _ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    step = span / (n - 1)
    return [lo + i * step for i in range(n)]


def line_plot(path, curves, title="", xlabel="", ylabel="", hlines=(),
              comment=""):
    """Write an SVG with the given curves.

    curves: list of (x_array, y_array, label) triples.
    hlines: horizontal reference lines as (y, label) pairs.
    comment: provenance string embedded as an SVG comment.
    """
    xs = [float(v) for x, _, _ in curves for v in x]
    ys = [float(v) for _, y, _ in curves for v in y]
    ys += [float(y) for y, _ in hlines]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    pw = _W - _ML - _MR
    ph = _H - _MT - _MB

    def px(x):
        return _ML + pw * (x - x_lo) / (x_hi - x_lo)

    def py(y):
        return _MT + ph * (1.0 - (y - y_lo) / (y_hi - y_lo))

    colors = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f"<!-- {comment} -->" if comment else "<!-- latticewaves -->",
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W/2:.0f}" y="18" text-anchor="middle" font-size="14">{title}</text>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for tx in _ticks(x_lo, x_hi):
        parts.append(f'<line x1="{px(tx):.1f}" y1="{_MT+ph}" x2="{px(tx):.1f}" '
                     f'y2="{_MT+ph+5}" stroke="black"/>')
        parts.append(f'<text x="{px(tx):.1f}" y="{_MT+ph+18}" '
                     f'text-anchor="middle">{tx:.3g}</text>')
    for ty in _ticks(y_lo, y_hi):
        parts.append(f'<line x1="{_ML-5}" y1="{py(ty):.1f}" x2="{_ML}" '
                     f'y2="{py(ty):.1f}" stroke="black"/>')
        parts.append(f'<text x="{_ML-8}" y="{py(ty)+4:.1f}" '
                     f'text-anchor="end">{ty:.3g}</text>')
    parts.append(f'<text x="{_ML+pw/2:.0f}" y="{_H-8}" text-anchor="middle">{xlabel}</text>')
    parts.append(f'<text x="14" y="{_MT+ph/2:.0f}" text-anchor="middle" '
                 f'transform="rotate(-90 14 {_MT+ph/2:.0f})">{ylabel}</text>')
    for y, label in hlines:
        parts.append(f'<line x1="{_ML}" y1="{py(y):.1f}" x2="{_ML+pw}" '
                     f'y2="{py(y):.1f}" stroke="#999" stroke-dasharray="4 3"/>')
        if label:
            parts.append(f'<text x="{_ML+pw-4}" y="{py(y)-4:.1f}" '
                         f'text-anchor="end" fill="#666">{label}</text>')
    for i, (x, y, label) in enumerate(curves):
        color = colors[i % len(colors)]
        pts = " ".join(f"{px(float(a)):.2f},{py(float(b)):.2f}"
                       for a, b in zip(x, y))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.5"/>')
        if label:
            parts.append(f'<text x="{_ML+8}" y="{_MT+16+14*i}" '
                         f'fill="{color}">{label}</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts))
