"""Run artefacts: solution.csv, report.json and plot.svg."""
import json
from pathlib import Path

import numpy as np

CSV_HEADER = "x,rho,u,p,rho_exact,u_exact,p_exact"

_PANEL_W, _PANEL_H, _PAD = 360, 260, 40
_LABELS = ("density", "velocity", "pressure")


def _fmt(value):
    return format(float(value), ".17g")


def write_solution_csv(path, x, w, w_ref=None):
    """One row per cell; reference columns hold ``nan`` when there is no reference."""
    if w_ref is None:
        w_ref = np.full_like(w, np.nan)
    rows = [CSV_HEADER]
    for k in range(len(x)):
        values = (x[k], *w[:, k], *w_ref[:, k])
        rows.append(",".join(_fmt(v) for v in values))
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def write_report(path, report):
    Path(path).write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def _panel(x, y, y_ref, left, title):
    lo = float(np.min(y if y_ref is None else np.concatenate([y, y_ref])))
    hi = float(np.max(y if y_ref is None else np.concatenate([y, y_ref])))
    if hi - lo < 1e-12:
        lo, hi = lo - 0.5, hi + 0.5
    x0, x1 = float(x[0]), float(x[-1])
    if x1 == x0:
        x1 = x0 + 1.0

    def sx(v):
        return left + _PAD + (v - x0) / (x1 - x0) * (_PANEL_W - 2 * _PAD)

    def sy(v):
        return _PANEL_H - _PAD - (v - lo) / (hi - lo) * (_PANEL_H - 2 * _PAD)

    parts = [
        f'<g class="panel" id="{title}">',
        f'<rect x="{left + _PAD}" y="{_PAD}" width="{_PANEL_W - 2 * _PAD}" '
        f'height="{_PANEL_H - 2 * _PAD}" fill="none" stroke="#888"/>',
        f'<text x="{left + _PANEL_W / 2:.1f}" y="{_PAD - 12}" text-anchor="middle" '
        f'font-size="14">{title}</text>',
        f'<text x="{left + _PAD - 4}" y="{_PAD + 4}" text-anchor="end" font-size="10">{hi:.4g}</text>',
        f'<text x="{left + _PAD - 4}" y="{_PANEL_H - _PAD}" text-anchor="end" '
        f'font-size="10">{lo:.4g}</text>',
    ]
    if y_ref is not None:
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, y_ref))
        parts.append(f'<polyline class="reference" points="{pts}" fill="none" '
                     f'stroke="#d62728" stroke-width="1.2"/>')
    parts.append('<g class="numerical" fill="#1f77b4">')
    parts.extend(f'<circle cx="{sx(a):.2f}" cy="{sy(b):.2f}" r="1.6"/>' for a, b in zip(x, y))
    parts.append("</g></g>")
    return "\n".join(parts)


def write_plot_svg(path, x, w, w_ref=None, title=""):
    """Density, velocity and pressure side by side: points for the run, a line for the reference."""
    width = 3 * _PANEL_W
    panels = [
        _panel(x, w[k], None if w_ref is None else w_ref[k], k * _PANEL_W, _LABELS[k])
        for k in range(3)
    ]
    svg = "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{_PANEL_H + 20}" '
        f'viewBox="0 0 {width} {_PANEL_H + 20}">',
        f"<title>{title}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
        *panels,
        "</svg>",
    ])
    Path(path).write_text(svg + "\n", encoding="utf-8")


def emit_outputs(report, field, reference, out_dir, gas):
    """Write the three run artefacts into ``out_dir`` and return their paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    x = field.grid.centers
    w = field.primitive(gas)
    w_ref = None if reference is None else reference.primitive(gas)
    paths = {
        "csv": out_dir / "solution.csv",
        "report": out_dir / "report.json",
        "plot": out_dir / "plot.svg",
    }
    write_solution_csv(paths["csv"], x, w, w_ref)
    write_report(paths["report"], report)
    write_plot_svg(paths["plot"], x, w, w_ref,
                   title=f"{report.case} {report.scheme} N={report.n_cells}")
    return paths
