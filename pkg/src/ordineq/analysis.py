"""End-to-end pipeline: sample every group, summarize, compare, emit files."""
from __future__ import annotations

import copy
import csv
import datetime
import json
import logging
import re
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import comparison as cmp
from . import measures as ms
from .errors import DegenerateSampleError, OrdineqError
from .io import AnalysisConfig, Group
from .posterior import CountData, PosteriorDraws, conjugate_draws, weighted_bootstrap_draws

log = logging.getLogger(__name__)

SECTIONS = ("proportions", "indices", "dominance", "curves", "density")
GL_PLOT_GRID = np.round(np.linspace(0.0, 1.0, 101), 12)

TIE_CONVENTION = (
    "scalar dominance requires weak inequality everywhere and strict inequality somewhere; "
    "probability curves count weak prefix inequalities"
)


def _with_context(exc: OrdineqError, context: str) -> OrdineqError:
    err = copy.copy(exc)
    err.args = (f"{context}: {exc}",)
    return err


def group_stream(name: str) -> int:
    """Stable per-group stream id, independent of group order in the config."""
    return zlib.crc32(name.encode("utf-8"))


def sample_group(group: Group, config: AnalysisConfig, workers: int = 1) -> PosteriorDraws:
    stream = group_stream(group.name)
    if isinstance(group.data, CountData):
        prior = config.prior if group.prior is None else group.prior
        return conjugate_draws(group.data, prior, config.draws, config.seed, stream, workers)
    return weighted_bootstrap_draws(group.data, config.draws, config.seed, stream, workers)


@dataclass
class GroupResult:
    group: Group
    draws: PosteriorDraws
    indices: dict[str, cmp.IndexPosterior] = field(default_factory=dict)
    summaries: dict[str, cmp.Summary] = field(default_factory=dict)
    densities: dict[str, cmp.DensityEstimate | None] = field(default_factory=dict)
    gl_at_mean: ms.GLCurve | None = None

    @property
    def mean_vector(self) -> ms.ProbabilityVector:
        return ms.ProbabilityVector(self.draws.mean())


@dataclass
class ComparisonResult:
    x: str
    y: str
    reports: dict[str, cmp.DominanceReport] = field(default_factory=dict)
    curves: dict[str, cmp.ProbabilityCurve] = field(default_factory=dict)


@dataclass
class AnalysisReport:
    config: AnalysisConfig
    groups: dict[str, GroupResult]
    comparisons: list[ComparisonResult]
    sections: tuple[str, ...] = SECTIONS
    artifacts: list[str] = field(default_factory=list)
    generated_at: str = ""

    def to_dict(self) -> dict:
        cfg = self.config
        groups = {}
        for name, gr in self.groups.items():
            g = gr.group
            entry = {
                "label": g.label,
                "K": g.K,
                "N": int(g.data.N),
                "sampler": gr.draws.meta.get("sampler"),
                "stream": gr.draws.stream,
            }
            if g.category_labels:
                entry["category_labels"] = list(g.category_labels)
            if "proportions" in self.sections:
                mean, sd = gr.draws.mean(), gr.draws.sd()
                entry["proportions"] = [
                    {"k": k + 1, "mean": float(mean[k]), "sd": float(sd[k])} for k in range(g.K)
                ]
            if gr.summaries:
                entry["indices"] = {k: s.as_dict() for k, s in gr.summaries.items()}
            if gr.gl_at_mean is not None:
                entry["gl_curve_at_mean"] = [list(bp) for bp in gr.gl_at_mean.breakpoints()]
            if gr.densities:
                entry["densities"] = {
                    k: (None if d is None else {"bandwidth": d.bandwidth, "points": int(d.grid.size)})
                    for k, d in gr.densities.items()
                }
            groups[name] = entry
        comparisons = []
        for cr in self.comparisons:
            item = {"x": cr.x, "y": cr.y}
            if cr.reports:
                item["criteria"] = {c: r.as_dict() for c, r in cr.reports.items()}
            if cr.curves:
                item["curves"] = {
                    k: {"axis": c.axis.tolist(), "probs": c.probs.tolist()} for k, c in cr.curves.items()
                }
            comparisons.append(item)
        return {
            "metadata": {
                "generated_at": self.generated_at,
                "version": __version__,
                "seed": cfg.seed,
                "draws": cfg.draws,
                "prior": cfg.prior,
                "alphas": list(cfg.alphas),
                "gld_grid_step": cfg.gld_grid_step,
                "sections": list(self.sections),
                "tie_convention": TIE_CONVENTION,
            },
            "groups": groups,
            "comparisons": comparisons,
            "artifacts": list(self.artifacts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        parts = [f"Posterior analysis: M = {self.config.draws} draws, seed {self.config.seed}"]
        if "proportions" in self.sections:
            parts.append(proportions_table(self))
        if "indices" in self.sections:
            parts.append(indices_table(self))
        if "dominance" in self.sections and self.comparisons:
            parts.append(dominance_table(self))
        return "\n\n".join(parts) + "\n"


def index_keys(config: AnalysisConfig) -> list[tuple[str, str, float | None]]:
    keys = [("H", "H", None), ("J", "J", None)]
    keys += [(f"CF({a:g})", "CF", a) for a in config.alphas]
    return keys


def run_analysis(config: AnalysisConfig, sections=SECTIONS, workers: int = 1) -> AnalysisReport:
    """Run the configured analysis; fully deterministic given the seed."""
    sections = tuple(s for s in SECTIONS if s in set(sections))
    grid = ms.default_grid(config.gld_grid_step)
    groups: dict[str, GroupResult] = {}
    for name, group in config.groups.items():
        try:
            gr = GroupResult(group, sample_group(group, config, workers))
            if "indices" in sections or "density" in sections:
                for key, kind, alpha in index_keys(config):
                    ip = cmp.index_posterior(gr.draws, kind, alpha)
                    gr.indices[key] = ip
                    if "indices" in sections and gr.draws.M >= 2:
                        gr.summaries[key] = cmp.summarize(ip)
                    if "density" in sections:
                        try:
                            gr.densities[key] = cmp.kde(ip)
                        except DegenerateSampleError as exc:
                            log.warning("group %r, %s: no density (%s)", name, key, exc)
                            gr.densities[key] = None
            if "curves" in sections:
                gr.gl_at_mean = ms.gl_curve(gr.mean_vector)
        except OrdineqError as exc:
            raise _with_context(exc, f"group {name!r}") from exc
        groups[name] = gr

    results = []
    want_dominance = "dominance" in sections
    want_curves = "curves" in sections
    for comp in config.comparisons:
        cr = ComparisonResult(comp.x, comp.y)
        if want_dominance or want_curves:
            X, Y = groups[comp.x].draws, groups[comp.y].draws
            try:
                if want_dominance:
                    for crit in comp.criteria:
                        cr.reports[crit] = cmp.dominance_probabilities(crit, X, Y, grid)
                if want_curves:
                    cr.curves["FSD X over Y"] = cmp.probability_curve_fsd(X, Y)
                    cr.curves["FSD Y over X"] = cmp.probability_curve_fsd(Y, X)
                    cr.curves["GLD X over Y"] = cmp.probability_curve_gld(X, Y, grid)
                    cr.curves["GLD Y over X"] = cmp.probability_curve_gld(Y, X, grid)
            except OrdineqError as exc:
                raise _with_context(exc, f"comparison {comp.x!r} vs {comp.y!r}") from exc
        results.append(cr)
    return AnalysisReport(config, groups, results, sections)


# --------------------------------------------------------------------------
# text tables

def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    fmt = lambda r: "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths)))
    rule = "-" * len(fmt(header))
    return "\n".join([fmt(header), rule] + [fmt(r) for r in rows])


def proportions_table(report: AnalysisReport) -> str:
    """Posterior means (sd) of every category probability, one column per group."""
    names = list(report.groups)
    K = max(gr.group.K for gr in report.groups.values())
    rows = []
    for k in range(K):
        row = [f"p({k + 1})"]
        for name in names:
            gr = report.groups[name]
            if k < gr.group.K:
                s = gr.draws.sd()[k]
                row.append(f"{gr.draws.mean()[k]:.4f} ({s:.4f})")
            else:
                row.append("")
        rows.append(row)
    title = "Posterior means (standard deviations) of population proportions"
    return title + "\n" + _table(["k"] + [report.groups[n].group.label for n in names], rows)


def indices_table(report: AnalysisReport) -> str:
    keys = [k for k, _, _ in index_keys(report.config)]
    rows = []
    for gr in report.groups.values():
        rows.append([gr.group.label] + [gr.summaries[k].cell() if k in gr.summaries else "-" for k in keys])
    return "Headcount and inequality measures: posterior mean (sd)\n" + _table(["group"] + keys, rows)


_ROW_LABELS = {
    "FSD": ("Pr[X >FSD Y]", "Pr[Y >FSD X]"),
    "restricted-FSD": ("Pr[X >rest FSD Y]", "Pr[Y >rest FSD X]"),
    "GLD": ("Pr[X >GLD Y]", "Pr[Y >GLD X]"),
}


def dominance_table(report: AnalysisReport) -> str:
    """Dominance probability triples, one column per compared pair."""
    blocks = []
    for crit in cmp.CRITERIA:
        comps = [c for c in report.comparisons if crit in c.reports]
        if not comps:
            continue
        header = [crit] + [f"X={c.x} Y={c.y}" for c in comps]
        lx, ly = _ROW_LABELS[crit]
        rows = [
            [lx] + [f"{c.reports[crit].prob_x:.4f}" for c in comps],
            [ly] + [f"{c.reports[crit].prob_y:.4f}" for c in comps],
            ["Pr(No Dominance)"] + [f"{c.reports[crit].prob_none:.4f}" for c in comps],
        ]
        blocks.append(_table(header, rows))
    return "Dominance probabilities\n" + "\n\n".join(blocks)


# --------------------------------------------------------------------------
# files

def slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", name).strip("_") or "group"


def _write_columns(path: Path, header: tuple[str, str], a, b) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for x, y in zip(np.asarray(a).tolist(), np.asarray(b).tolist()):
            w.writerow([repr(x), repr(y)])


def emit_plot_data(report: AnalysisReport, output_dir, render: bool = False) -> list[Path]:
    """Write one two-column CSV per curve and, with ``render``, SVG charts.

    GL curves at posterior means are written on a common 0, 0.01, ..., 1
    grid so curves of different groups line up row by row.
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for name, gr in report.groups.items():
        if gr.gl_at_mean is not None:
            path = out / f"gl_{slug(name)}.csv"
            _write_columns(path, ("u", "value"), GL_PLOT_GRID, ms.gl_eval(gr.gl_at_mean, GL_PLOT_GRID))
            written.append(path)
        for key, dens in gr.densities.items():
            if dens is None:
                continue
            path = out / f"kde_{slug(key)}_{slug(name)}.csv"
            _write_columns(path, ("grid", "density"), dens.grid, dens.density)
            written.append(path)
    for cr in report.comparisons:
        for key, curve in cr.curves.items():
            crit, direction = key.split(" ", 1)
            first, second = (cr.x, cr.y) if direction == "X over Y" else (cr.y, cr.x)
            path = out / f"{crit.lower()}_curve_{slug(first)}_over_{slug(second)}.csv"
            _write_columns(path, ("axis", "prob"), curve.axis, curve.probs)
            written.append(path)
    if render:
        from .plotting import render_figures

        written += render_figures(report, out)
    report.artifacts = [p.name for p in written]
    return written


def write_report(report: AnalysisReport, output_dir, timestamp: bool = True) -> list[Path]:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if timestamp:
        report.generated_at = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    paths = [out / "report.json", out / "report.txt"]
    paths[0].write_text(report.to_json(), encoding="utf-8")
    paths[1].write_text(report.to_text(), encoding="utf-8")
    return paths


def write_draws(report: AnalysisReport, output_dir) -> list[Path]:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, gr in report.groups.items():
        path = out / f"draws_{slug(name)}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([f"p{k + 1}" for k in range(gr.draws.K)])
            for row in gr.draws.draws.tolist():
                w.writerow([repr(v) for v in row])
        written.append(path)
    return written
