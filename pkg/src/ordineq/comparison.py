"""Posterior summaries: index posteriors, dominance probabilities,
probability curves and kernel density estimates.

Dominance probabilities pair draw m of X with draw m of Y. The scalar
reports use the strict-somewhere classification of the deterministic
predicates, so identical inputs land in "no dominance". Probability curves
count weak prefix inequalities, so the scalar probability can never exceed
any point on its curve.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import measures as ms
from .errors import ConfigError, DegenerateSampleError, DimensionError, InsufficientDrawsError
from .posterior import PosteriorDraws

INDEX_KINDS = ("H", "J", "CF")
CRITERIA = ("FSD", "restricted-FSD", "GLD")

KDE_POINTS = 512


@dataclass(frozen=True, eq=False)
class IndexPosterior:
    values: np.ndarray
    kind: str
    alpha: float | None = None

    @property
    def label(self) -> str:
        return f"CF({self.alpha:g})" if self.kind == "CF" else self.kind

    @property
    def M(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class Summary:
    mean: float
    sd: float
    q025: float
    q50: float
    q975: float

    def cell(self, digits: int = 4) -> str:
        """``mean (sd)`` as printed in the posterior tables."""
        return f"{self.mean:.{digits}f} ({self.sd:.{digits}f})"

    def as_dict(self) -> dict:
        return {"mean": self.mean, "sd": self.sd,
                "q025": self.q025, "q50": self.q50, "q975": self.q975}


@dataclass(frozen=True)
class DominanceReport:
    """Counts of draws in which X dominates, Y dominates, or neither."""

    criterion: str
    count_x: int
    count_y: int
    M: int

    @property
    def count_none(self) -> int:
        return self.M - self.count_x - self.count_y

    @property
    def prob_x(self) -> float:
        return self.count_x / self.M

    @property
    def prob_y(self) -> float:
        return self.count_y / self.M

    @property
    def prob_none(self) -> float:
        # complement rather than count_none / M so the three probabilities
        # add to exactly 1.0 in floating point
        return 1.0 - (self.prob_x + self.prob_y)

    def as_dict(self) -> dict:
        return {"criterion": self.criterion, "M": self.M,
                "prob_x": self.prob_x, "prob_y": self.prob_y, "prob_none": self.prob_none,
                "count_x": self.count_x, "count_y": self.count_y, "count_none": self.count_none}


@dataclass(frozen=True, eq=False)
class ProbabilityCurve:
    axis: np.ndarray
    probs: np.ndarray
    criterion: str
    direction: str = "X over Y"


@dataclass(frozen=True, eq=False)
class DensityEstimate:
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float

    def integral(self) -> float:
        return float(np.trapezoid(self.density, self.grid))


def _matrix(draws) -> np.ndarray:
    if isinstance(draws, PosteriorDraws):
        return draws.draws
    return ms._as_rows(draws)


def index_posterior(draws, kind: str, alpha: float | None = None) -> IndexPosterior:
    P = _matrix(draws)
    if kind not in INDEX_KINDS:
        raise ConfigError(f"unknown index kind {kind!r}; expected one of {INDEX_KINDS}")
    if (kind == "CF") != (alpha is not None):
        raise ConfigError("alpha must be given for CF and only for CF")
    if kind == "H":
        values = ms.headcount_rows(P)
    elif kind == "J":
        values = ms.j_rows(P)
    else:
        values = ms.cf_rows(P, alpha)
        alpha = float(alpha)
    values.flags.writeable = False
    return IndexPosterior(values, kind, alpha)


def summarize(ip) -> Summary:
    """Sample mean, sd (divisor M-1) and 2.5/50/97.5% quantiles."""
    v = np.asarray(ip.values if isinstance(ip, IndexPosterior) else ip, dtype=float)
    if v.size < 2:
        raise InsufficientDrawsError(f"need at least 2 draws to summarize, got {v.size}")
    # shifting by the first value makes constant samples summarize exactly
    d = v - v[0]
    q = np.quantile(v, [0.025, 0.5, 0.975], method="linear")
    return Summary(float(v[0] + d.mean()), float(d.std(ddof=1)), float(q[0]), float(q[1]), float(q[2]))


def _pair(drawsX, drawsY) -> tuple[np.ndarray, np.ndarray]:
    X, Y = _matrix(drawsX), _matrix(drawsY)
    if X.shape[0] != Y.shape[0]:
        raise DimensionError(f"draw counts differ: {X.shape[0]} vs {Y.shape[0]}")
    if X.shape[1] != Y.shape[1]:
        raise DimensionError(f"category counts differ: {X.shape[1]} vs {Y.shape[1]}")
    return X, Y


def _report(criterion: str, outcome: np.ndarray) -> DominanceReport:
    return DominanceReport(criterion, int(np.count_nonzero(outcome == 1)),
                           int(np.count_nonzero(outcome == -1)), int(outcome.size))


def fsd_probabilities(drawsX, drawsY) -> DominanceReport:
    return _report("FSD", ms.fsd_rows(*_pair(drawsX, drawsY)))


def restricted_fsd_probabilities(drawsX, drawsY) -> DominanceReport:
    return _report("restricted-FSD", ms.restricted_fsd_rows(*_pair(drawsX, drawsY)))


def gld_probabilities(drawsX, drawsY, grid=None) -> DominanceReport:
    return _report("GLD", ms.gld_rows(*_pair(drawsX, drawsY), grid))


def dominance_probabilities(criterion: str, drawsX, drawsY, grid=None) -> DominanceReport:
    if criterion == "FSD":
        return fsd_probabilities(drawsX, drawsY)
    if criterion == "restricted-FSD":
        return restricted_fsd_probabilities(drawsX, drawsY)
    if criterion == "GLD":
        return gld_probabilities(drawsX, drawsY, grid)
    raise ConfigError(f"unknown criterion {criterion!r}; expected one of {CRITERIA}")


def _prefix_probs(ok: np.ndarray) -> np.ndarray:
    return np.logical_and.accumulate(ok, axis=1).mean(axis=0)


def probability_curve_fsd(drawsX, drawsY) -> ProbabilityCurve:
    """Probability that X's CDF is weakly below Y's at every category up to k,
    for k = 1..K-1."""
    X, Y = _pair(drawsX, drawsY)
    FX, FY = ms.cdf_rows(X)[:, :-1], ms.cdf_rows(Y)[:, :-1]
    axis = np.arange(1, X.shape[1])
    return ProbabilityCurve(axis, _prefix_probs(FX <= FY), "FSD")


def probability_curve_gld(drawsX, drawsY, grid=None) -> ProbabilityCurve:
    X, Y = _pair(drawsX, drawsY)
    grid = ms.default_grid() if grid is None else ms.check_grid(grid)
    ok = ms.gl_rows(X, grid) >= ms.gl_rows(Y, grid)
    return ProbabilityCurve(grid.copy(), _prefix_probs(ok), "GLD")


def silverman_bandwidth(values) -> float:
    v = np.asarray(values, dtype=float)
    sd = v.std(ddof=1)
    q75, q25 = np.quantile(v, [0.75, 0.25])
    spread = min(sd, (q75 - q25) / 1.34)
    if spread <= 0:
        spread = sd
    return 0.9 * spread * v.size ** (-0.2)


def kde(ip, bandwidth: float | None = None, points: int = KDE_POINTS) -> DensityEstimate:
    """Gaussian kernel density on an evenly spaced grid over [min - 3h, max + 3h]."""
    v = np.asarray(ip.values if isinstance(ip, IndexPosterior) else ip, dtype=float)
    if v.size < 10:
        raise InsufficientDrawsError(f"need at least 10 draws for a density estimate, got {v.size}")
    if not v.std() > 0:
        raise DegenerateSampleError("cannot estimate a density from a zero-variance sample")
    h = silverman_bandwidth(v) if bandwidth is None else float(bandwidth)
    if not h > 0:
        raise DegenerateSampleError(f"bandwidth must be positive, got {h}")
    grid = np.linspace(v.min() - 3 * h, v.max() + 3 * h, points)
    dens = np.zeros(points)
    norm = 1.0 / (v.size * h * np.sqrt(2 * np.pi))
    for lo in range(0, v.size, 4096):
        z = (grid[:, None] - v[None, lo:lo + 4096]) / h
        dens += np.exp(-0.5 * z * z).sum(axis=1)
    return DensityEstimate(grid, dens * norm, h)
