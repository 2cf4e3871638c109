"""CSV, JSON and SVG writers.

Numbers are written with ``format(x, '.15g')``, which ignores the locale
and keeps 15 significant digits.  The SVG writer draws plain polylines; it
is a quick look, not a plotting library.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

__all__ = ["fmt", "write_csv", "read_csv", "write_json", "write_svg", "to_jsonable"]

_PALETTE = ("#000000", "#2ca02c", "#d62728", "#1f77b4", "#9467bd", "#ff7f0e")


def fmt(x):
    """Locale-independent 15-significant-digit rendering."""
    return format(float(x), ".15g")


def _open(target):
    if target is None or target == "-":
        return None
    path = Path(target)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_csv(target, columns, stream=None):
    """Write equal-length columns (name -> array) with a header row.

    `target` is a path; None or "-" writes to `stream` (or returns a string).
    """
    names = list(columns)
    data = [np.atleast_1d(np.asarray(columns[n], dtype=float)) for n in names]
    n = {len(d) for d in data}
    if len(n) != 1:
        raise ValueError("columns have different lengths")
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(names)
    for row in zip(*data):
        wr.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    path = _open(target)
    if path is not None:
        path.write_text(text)
        return path
    if stream is not None:
        stream.write(text)
    return text


def read_csv(path):
    """Inverse of :func:`write_csv`: dict of float arrays."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], np.array(rows[1:], dtype=float)
    return {name: body[:, i] for i, name in enumerate(header)}


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def write_json(target, obj, stream=None):
    text = json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"
    path = _open(target)
    if path is not None:
        path.write_text(text)
        return path
    if stream is not None:
        stream.write(text)
    return text


def write_svg(target, x, series, title="", width=640, height=400, ylim=None):
    """Polylines of each named y-series against x on shared axes."""
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in series.items()}
    finite = np.concatenate([v[np.isfinite(v)] for v in ys.values()])
    lo, hi = ylim if ylim is not None else (finite.min(), finite.max())
    if hi <= lo:
        hi = lo + 1.0
    pad = 40

    def px(a):
        return pad + (a - x.min()) / (x.max() - x.min()) * (width - 2 * pad)

    def py(b):
        return height - pad - (np.clip(b, lo, hi) - lo) / (hi - lo) * (height - 2 * pad)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<text x="{pad}" y="{pad // 2}" font-size="14">{title}</text>',
             f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="#888"/>',
             f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="#888"/>',
             f'<text x="{pad}" y="{height - 10}" font-size="11">{fmt(x.min())}</text>',
             f'<text x="{width - pad}" y="{height - 10}" font-size="11" text-anchor="end">{fmt(x.max())}</text>',
             f'<text x="2" y="{pad}" font-size="11">{format(hi, ".4g")}</text>',
             f'<text x="2" y="{height - pad}" font-size="11">{format(lo, ".4g")}</text>']
    for i, (name, y) in enumerate(ys.items()):
        ok = np.isfinite(y)
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x[ok], y[ok]))
        color = _PALETTE[i % len(_PALETTE)]
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        parts.append(f'<text x="{width - pad}" y="{pad + 14 * (i + 1)}" font-size="11" '
                     f'fill="{color}" text-anchor="end">{name}</text>')
    parts.append("</svg>\n")
    path = _open(target)
    path.write_text("\n".join(parts))
    return path
