"""Minimal SVG line charts of the emitted curves (needs matplotlib)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


# fixed salt and no date stamp keep the SVG output byte-stable
_RC = {"svg.hashsalt": "ordineq", "svg.fonttype": "none"}


def _save(fig, path: Path) -> Path:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def render_figures(report, out: Path) -> list[Path]:
    written = []
    with matplotlib.rc_context(_RC):
        curves = [(gr.group.label, gr.gl_at_mean) for gr in report.groups.values() if gr.gl_at_mean is not None]
        if curves:
            fig, ax = plt.subplots(figsize=(5, 5))
            ax.plot([0, 1], [0, 1], color="0.6", lw=0.8, label="equality")
            for label, curve in curves:
                ax.plot(curve.u, curve.values, label=label)
            ax.set_xlabel("population proportion u")
            ax.set_ylabel("GL(u)")
            ax.set_xlim(0, 1)
            ax.set_ylim(0, 1)
            ax.legend(frameon=False)
            ax.set_title("Generalized Lorenz curves at posterior means")
            written.append(_save(fig, out / "fig_gl_curves.svg"))

        for crit, xlabel in (("FSD", "category k"), ("GLD", "population proportion u")):
            series = []
            for cr in report.comparisons:
                for direction, (a, b) in (("X over Y", (cr.x, cr.y)), ("Y over X", (cr.y, cr.x))):
                    c = cr.curves.get(f"{crit} {direction}")
                    if c is not None:
                        series.append((f"{a} over {b}", c))
            if not series:
                continue
            fig, ax = plt.subplots(figsize=(6, 4))
            for label, c in series:
                ax.plot(c.axis, c.probs, marker="o" if crit == "FSD" else None, label=label)
            ax.set_xlabel(xlabel)
            ax.set_ylabel("probability of dominance")
            ax.set_ylim(-0.02, 1.02)
            ax.legend(frameon=False, fontsize="small")
            ax.set_title(f"{crit} probability curves")
            written.append(_save(fig, out / f"fig_{crit.lower()}_curves.svg"))

        keys = []
        for gr in report.groups.values():
            keys += [k for k in gr.densities if k not in keys]
        for key in keys:
            fig, ax = plt.subplots(figsize=(6, 4))
            for gr in report.groups.values():
                d = gr.densities.get(key)
                if d is not None:
                    ax.plot(d.grid, d.density, label=gr.group.label)
            ax.set_xlabel(key)
            ax.set_ylabel("posterior density")
            ax.legend(frameon=False)
            ax.set_title(f"Posterior densities: {key}")
            name = "".join(ch if ch.isalnum() else "_" for ch in key).strip("_")
            written.append(_save(fig, out / f"fig_density_{name}.svg"))
    return written


