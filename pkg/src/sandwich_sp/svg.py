"""Minimal standalone SVG line charts (no plotting dependency)."""
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 400
MARGIN = (60, 20, 20, 50)          # left, right, top, bottom
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf")


class EmptySeriesError(ValueError):
    pass


def _normalise(series):
    items = list(series.items()) if isinstance(series, dict) else list(series)
    if not items:
        raise EmptySeriesError("no series to plot")
    out = []
    for name, (x, y) in items:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise ValueError(f"series {name!r}: x and y must be 1-D arrays of equal length")
        if x.size == 0:
            raise EmptySeriesError(f"series {name!r} is empty")
        out.append((str(name), x, y))
    return out


def _ticks(lo, hi, count=5):
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def render_svg(series, log_y=False, title=None, xlabel="r", ylabel=None):
    """Return the SVG document as a string; identical input gives identical text."""
    items = _normalise(series)
    if log_y:
        kept = []
        for name, x, y in items:
            keep = np.isfinite(y) & (y > 0)
            kept.append((name, x[keep], np.log10(y[keep])))
        items = kept
        if not any(x.size for _, x, _ in items):
            raise EmptySeriesError("no positive values to plot on a log axis")
    else:
        items = [(n, x[np.isfinite(y)], y[np.isfinite(y)]) for n, x, y in items]
    xs = np.concatenate([x for _, x, _ in items])
    ys = np.concatenate([y for _, _, y in items])
    if xs.size == 0:
        raise EmptySeriesError("no finite values to plot")
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    left, right, top, bottom = MARGIN
    pw, ph = WIDTH - left - right, HEIGHT - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<text x="{px(t):.2f}" y="{top + ph + 15}" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(y0, y1):
        label = f"1e{t:.3g}" if log_y else f"{t:.4g}"
        out.append(f'<text x="{left - 5}" y="{py(t) + 4:.2f}" text-anchor="end">{label}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="14" y="{top + ph / 2:.2f}" text-anchor="middle" '
                   f'transform="rotate(-90 14 {top + ph / 2:.2f})">{escape(ylabel)}</text>')
    if title:
        out.append(f'<text x="{left + pw / 2:.2f}" y="{top - 5}" text-anchor="middle">{escape(title)}</text>')
    for i, (name, x, y) in enumerate(items):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 12 + 14 * i
        out.append(f'<line x1="{left + pw - 110}" y1="{ly}" x2="{left + pw - 90}" y2="{ly}" stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{left + pw - 85}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(series, path, log_y=False, title=None, xlabel="r", ylabel=None):
    """Write ``series`` ({name: (x, y)} or [(name, (x, y))]) as an SVG line chart."""
    text = render_svg(series, log_y=log_y, title=title, xlabel=xlabel, ylabel=ylabel)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
