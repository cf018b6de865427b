"""Small dependency-free SVG writers: one heatmap and one line plot.

Output text depends only on the input numbers, so files are reproducible.
"""
import numpy as np

# viridis-like stops
_STOPS = np.array([
    [68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37],
], dtype=float)
_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"]


def _color(v):
    v = min(max(float(v), 0.0), 1.0) * (len(_STOPS) - 1)
    i = min(int(v), len(_STOPS) - 2)
    c = _STOPS[i] + (v - i) * (_STOPS[i + 1] - _STOPS[i])
    return "#%02x%02x%02x" % tuple(int(round(x)) for x in c)


def _block_reduce(a, max_cells):
    step = max(1, int(np.ceil(max(a.shape) / max_cells)))
    n0, n1 = a.shape[0] // step, a.shape[1] // step
    return a[:n0 * step, :n1 * step].reshape(n0, step, n1, step).mean(axis=(1, 3))


def heatmap(path, values, x, y, title="", xlabel="", ylabel="", max_cells=160):
    """values[j, k] drawn with x[j] horizontal and y[k] vertical (y up)."""
    v = _block_reduce(np.asarray(values, dtype=float), max_cells)
    vmax = v.max() if v.max() > 0 else 1.0
    nx, ny = v.shape
    cell = 3
    left, top = 60, 30
    w, h = nx * cell, ny * cell
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w + left + 20}" height="{h + top + 50}">',
           f'<text x="{left}" y="18" font-size="13">{title}</text>']
    for j in range(nx):
        for k in range(ny):
            out.append(f'<rect x="{left + j * cell}" y="{top + (ny - 1 - k) * cell}" '
                       f'width="{cell}" height="{cell}" fill="{_color(v[j, k] / vmax)}"/>')
    out.append(f'<text x="{left}" y="{top + h + 18}" font-size="11">{x[0]:.4g}</text>')
    out.append(f'<text x="{left + w}" y="{top + h + 18}" font-size="11" text-anchor="end">{x[-1]:.4g}</text>')
    out.append(f'<text x="{left + w / 2:.1f}" y="{top + h + 36}" font-size="12" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="{left - 6}" y="{top + h}" font-size="11" text-anchor="end">{y[0]:.4g}</text>')
    out.append(f'<text x="{left - 6}" y="{top + 10}" font-size="11" text-anchor="end">{y[-1]:.4g}</text>')
    out.append(f'<text x="14" y="{top + h / 2:.1f}" font-size="12" transform="rotate(-90 14 {top + h / 2:.1f})" '
               f'text-anchor="middle">{ylabel}</text>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")


def line_plot(path, series, title="", xlabel="", ylabel="", logy=False, markers=False):
    """series: list of (x, y, label)."""
    W, H, left, top, right, bottom = 520, 320, 70, 30, 130, 50
    xs = np.concatenate([np.asarray(s[0], float) for s in series])
    ys = np.concatenate([np.asarray(s[1], float) for s in series])
    ok = np.isfinite(ys) & (ys > 0 if logy else True)
    ys_t = np.log10(ys[ok]) if logy else ys[ok]
    x0, x1 = float(np.min(xs)), float(np.max(xs))
    y0, y1 = float(np.min(ys_t)), float(np.max(ys_t))
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def px(x):
        return left + (x - x0) / (x1 - x0) * (W - left - right)

    def py(y):
        y = np.log10(y) if logy else y
        return top + (1.0 - (y - y0) / (y1 - y0)) * (H - top - bottom)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">',
           f'<text x="{left}" y="18" font-size="13">{title}</text>',
           f'<rect x="{left}" y="{top}" width="{W - left - right}" height="{H - top - bottom}" '
           'fill="none" stroke="black"/>']
    for i, (x, y, label) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = [(px(a), py(b)) for a, b in zip(x, y) if np.isfinite(b) and (b > 0 or not logy)]
        if pts:
            d = " ".join(f"{a:.2f},{b:.2f}" for a, b in pts)
            out.append(f'<polyline points="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
            if markers:
                out += [f'<circle cx="{a:.2f}" cy="{b:.2f}" r="2.5" fill="{color}"/>' for a, b in pts]
        out.append(f'<text x="{W - right + 8}" y="{top + 14 + 16 * i}" font-size="11" fill="{color}">{label}</text>')
    lo_lab = f"1e{y0:.3g}" if logy else f"{y0:.4g}"
    hi_lab = f"1e{y1:.3g}" if logy else f"{y1:.4g}"
    out += [f'<text x="{left}" y="{H - bottom + 16}" font-size="11">{x0:.4g}</text>',
            f'<text x="{W - right}" y="{H - bottom + 16}" font-size="11" text-anchor="end">{x1:.4g}</text>',
            f'<text x="{left - 4}" y="{H - bottom}" font-size="11" text-anchor="end">{lo_lab}</text>',
            f'<text x="{left - 4}" y="{top + 10}" font-size="11" text-anchor="end">{hi_lab}</text>',
            f'<text x="{(left + W - right) / 2:.1f}" y="{H - 12}" font-size="12" text-anchor="middle">{xlabel}</text>',
            f'<text x="14" y="{(top + H - bottom) / 2:.1f}" font-size="12" '
            f'transform="rotate(-90 14 {(top + H - bottom) / 2:.1f})" text-anchor="middle">{ylabel}</text>',
            "</svg>"]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
