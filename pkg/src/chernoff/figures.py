"""Data behind the four standard plots, plus their structural checks.

fig1  Ai on [-12, 2] and its 25-, 125- and 500-term Hadamard products
fig2  the density f_{Z_c}
fig3  -log f_{Z_c}
fig4  (-log f_{Z_c})''
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import airy
from .distribution import ChernoffDist, w
from .report import read_csv, write_csv, write_svg

__all__ = ["FigureCheck", "emit_figures", "check_figures", "PRODUCT_TERMS"]

PRODUCT_TERMS = (25, 125, 500)
W0_PUBLISHED = 3.4052


@dataclass(frozen=True)
class FigureCheck:
    name: str
    passed: bool
    detail: str


def _grid(lo, hi, step):
    n = int(round((hi - lo) / step))
    return np.round(lo + step * np.arange(n + 1), 12)


def emit_figures(outdir, c=1.0, svg=False, dist=None, step=0.01):
    """Write fig1.csv .. fig4.csv (and .svg files if asked) into `outdir`.

    Returns a dict mapping figure name to the CSV path.
    """
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    d = dist if dist is not None else ChernoffDist(c)
    paths = {}

    x = _grid(-12.0, 2.0, 0.02)
    fig1 = {"x": x, "ai": airy.ai(x).real}
    for m in PRODUCT_TERMS:
        fig1[f"product_{m}"] = airy.ai_hadamard(x, m)
    paths["fig1"] = write_csv(out / "fig1.csv", fig1)

    scale = d.c ** (-2.0 / 3.0)
    t = _grid(-3.0 * scale, 3.0 * scale, step * scale)
    f = d.pdf(t)
    paths["fig2"] = write_csv(out / "fig2.csv", {"t": t, "f": f})
    paths["fig3"] = write_csv(out / "fig3.csv", {"t": t, "neg_log_f": -np.log(f)})

    t4 = _grid(-2.5 * scale, 2.5 * scale, step * scale)
    paths["fig4"] = write_csv(out / "fig4.csv", {"t": t4, "w": w(d, t4)})

    if svg:
        write_svg(out / "fig1.svg", x, {k: v for k, v in fig1.items() if k != "x"},
                  title="Ai and Hadamard products", ylim=(-0.6, 0.6))
        write_svg(out / "fig2.svg", t, {"f": f}, title="density f_Z")
        write_svg(out / "fig3.svg", t, {"-log f": -np.log(f)}, title="-log f_Z")
        write_svg(out / "fig4.svg", t4, {"(-log f)''": w(d, t4)}, title="(-log f_Z)''")
    return paths


def check_figures(outdir, tol_w0=1e-3):
    """Structural checks on emitted figure data (c = 1 values for fig4)."""
    out = Path(outdir)
    res = []

    f1 = read_csv(out / "fig1.csv")
    gaps = {m: float(np.max(np.abs(f1[f"product_{m}"] - f1["ai"]))) for m in PRODUCT_TERMS}
    ok = gaps[500] < gaps[25] and gaps[500] < gaps[125] < gaps[25]
    res.append(FigureCheck("fig1", ok, "sup gaps " + ", ".join(f"m={m}: {g:.4g}" for m, g in gaps.items())))

    f2 = read_csv(out / "fig2.csv")
    i = int(np.argmax(f2["f"]))
    res.append(FigureCheck("fig2", bool(abs(f2["t"][i]) < 1e-12),
                           f"max f = {f2['f'][i]:.10g} at t = {f2['t'][i]:.4g}"))

    f3 = read_csv(out / "fig3.csv")
    j = int(np.argmin(f3["neg_log_f"]))
    d2 = np.diff(f3["neg_log_f"], 2)
    res.append(FigureCheck("fig3", bool(abs(f3["t"][j]) < 1e-12) and bool(np.all(d2 > -1e-9)),
                           f"min at t = {f3['t'][j]:.4g}, min second difference {d2.min():.3g}"))

    # w is flat to ~1e-14 near 0, so the minimum is located up to quadrature noise
    f4 = read_csv(out / "fig4.csv")
    wmin = float(np.min(f4["w"]))
    w_at0 = float(f4["w"][np.argmin(np.abs(f4["t"]))])
    ok = bool(w_at0 - wmin <= 1e-6) and bool(abs(wmin - W0_PUBLISHED) <= tol_w0)
    res.append(FigureCheck("fig4", ok, f"min w = {wmin:.8g}, w(0) = {w_at0:.12g}"))
    return res
