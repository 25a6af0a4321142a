"""Posterior draws of category probabilities.

Two samplers are provided: a conjugate Dirichlet posterior for plain
category counts, and a weighted Bayesian bootstrap for survey microdata
carrying sampling weights.

Randomness discipline: draw ``m`` of stream ``s`` under seed ``seed`` is
generated from its own PCG64 generator seeded by
``SeedSequence(seed, spawn_key=(s, m))``. Draws are therefore independent
of evaluation order and of how the work is split across threads, and the
first ``M'`` rows of an ``M``-draw run do not depend on ``M``.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError
from .measures import ProbabilityVector

log = logging.getLogger(__name__)

DEFAULT_DRAWS = 10_000


@dataclass(frozen=True, eq=False)
class CountData:
    counts: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.counts)
        if raw.ndim != 1 or raw.size < 2:
            raise DomainError(f"counts must be a 1-d array with K >= 2 entries, got shape {raw.shape}")
        if not np.all(np.isfinite(raw)) or np.any(raw != np.round(raw)):
            raise DomainError("counts must be integers")
        arr = raw.astype(np.int64)
        if np.any(arr < 0):
            raise DomainError("counts must be nonnegative")
        arr.flags.writeable = False
        object.__setattr__(self, "counts", arr)

    @property
    def K(self) -> int:
        return self.counts.size

    @property
    def N(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True, eq=False)
class WeightedMicrodata:
    """Unit records: a category in ``1..K`` and a positive sampling weight.

    ``n_categories`` defaults to the largest observed category; pass it
    explicitly when several groups must share a common K.
    """

    categories: np.ndarray
    weights: np.ndarray
    n_categories: int | None = None

    def __post_init__(self):
        cats = np.asarray(self.categories)
        w = np.asarray(self.weights, dtype=float)
        if cats.ndim != 1 or cats.shape != w.shape:
            raise DomainError("categories and weights must be 1-d arrays of equal length")
        if cats.size == 0:
            raise DomainError("microdata has no records")
        if np.any(cats != np.round(cats)):
            raise DomainError("categories must be integers")
        cats = cats.astype(np.int64)
        K = int(cats.max()) if self.n_categories is None else int(self.n_categories)
        if K < 2:
            raise DomainError(f"need at least 2 categories, got K={K}")
        if cats.min() < 1 or cats.max() > K:
            raise DomainError(f"categories must lie in 1..{K}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise DomainError("weights must be positive and finite")
        cats.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "categories", cats)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "n_categories", K)

    @property
    def K(self) -> int:
        return self.n_categories

    @property
    def N(self) -> int:
        return self.categories.size

    def counts(self) -> CountData:
        """Unweighted category counts."""
        return CountData(np.bincount(self.categories - 1, minlength=self.K))


@dataclass(frozen=True, eq=False)
class PosteriorDraws:
    """``M`` posterior draws, one probability vector per row."""

    draws: np.ndarray
    seed: int | None = None
    stream: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        arr = np.array(self.draws, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 2:
            raise DomainError(f"draws must be an (M >= 1, K >= 2) array, got shape {arr.shape}")
        if np.any(arr < 0) or not np.allclose(arr.sum(axis=1), 1.0, rtol=0, atol=1e-12):
            raise DomainError("every draw must be a probability vector")
        arr.flags.writeable = False
        object.__setattr__(self, "draws", arr)

    @property
    def M(self) -> int:
        return self.draws.shape[0]

    @property
    def K(self) -> int:
        return self.draws.shape[1]

    def __len__(self):
        return self.M

    def __getitem__(self, m) -> ProbabilityVector:
        return ProbabilityVector(self.draws[m])

    def mean(self) -> np.ndarray:
        return self.draws.mean(axis=0)

    def sd(self) -> np.ndarray:
        return self.draws.std(axis=0, ddof=1) if self.M > 1 else np.zeros(self.K)

    @classmethod
    def constant(cls, p, M: int) -> "PosteriorDraws":
        """``M`` copies of one vector; handy for deterministic checks."""
        p = p if isinstance(p, ProbabilityVector) else ProbabilityVector(p)
        return cls(np.tile(p.probs, (M, 1)))


def draw_rng(seed: int, m: int, stream: int = 0) -> np.random.Generator:
    """Generator for draw ``m`` of ``stream``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream, m))))


def _log_gamma_variates(shape: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """log of independent Gamma(shape_k, 1) variates.

    Shapes below 1 use Gamma(a) = Gamma(a + 1) * U**(1/a), kept in log
    space so tiny shapes do not underflow to an all-zero vector.
    """
    small = shape < 1.0
    g = rng.standard_gamma(np.where(small, shape + 1.0, shape))
    out = np.log(g)
    if small.any():
        u = rng.random(shape.size)
        out = np.where(small, out + np.log(u) / shape, out)
    return out


def _normalize_log(logg: np.ndarray) -> np.ndarray:
    z = np.exp(logg - logg.max())
    p = z / z.sum()
    return p / p.sum()


def _check_concentration(concentration) -> np.ndarray:
    a = np.asarray(concentration, dtype=float)
    if a.ndim != 1 or a.size < 2:
        raise DomainError("concentration must be a 1-d array with K >= 2 entries")
    if not np.all(np.isfinite(a)) or np.any(a <= 0):
        raise DomainError(f"concentration parameters must be positive, got {a.tolist()}")
    return a


def dirichlet_sample(concentration, rng: np.random.Generator) -> ProbabilityVector:
    """One Dirichlet draw: K independent gamma variates normalized by their sum."""
    a = _check_concentration(concentration)
    return ProbabilityVector(_normalize_log(_log_gamma_variates(a, rng)))


def _check_M(M) -> int:
    if isinstance(M, bool) or int(M) != M or M < 1:
        raise DomainError(f"number of draws must be a positive integer, got {M!r}")
    return int(M)


def _generate(fn, M: int, workers: int) -> np.ndarray:
    if workers <= 1 or M < 2 * workers:
        return np.stack([fn(m) for m in range(M)])
    bounds = np.linspace(0, M, workers + 1).astype(int)

    def block(i):
        return [fn(m) for m in range(bounds[i], bounds[i + 1])]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(block, range(workers)))
    return np.stack([row for part in parts for row in part])


def conjugate_draws(
    data: CountData,
    prior=1.0,
    M: int = DEFAULT_DRAWS,
    seed: int = 0,
    stream: int = 0,
    workers: int = 1,
) -> PosteriorDraws:
    """Draws from the Dirichlet(counts + prior) posterior.

    ``prior`` is a scalar (symmetric Dirichlet) or one positive value per
    category; the default is the uniform Dirichlet(1, ..., 1).
    """
    M = _check_M(M)
    if not isinstance(data, CountData):
        data = CountData(data)
    try:
        prior = np.broadcast_to(np.asarray(prior, dtype=float), data.counts.shape)
    except ValueError:
        raise DimensionError(f"prior has {np.size(prior)} entries for K={data.K} categories") from None
    if not (np.all(np.isfinite(prior)) and np.all(prior > 0)):
        raise DomainError(f"prior parameters must be positive, got {prior.tolist()}")
    a = _check_concentration(data.counts + prior)

    def one(m):
        return _normalize_log(_log_gamma_variates(a, draw_rng(seed, m, stream)))

    log.debug("conjugate_draws: K=%d N=%d M=%d seed=%d stream=%d", data.K, data.N, M, seed, stream)
    return PosteriorDraws(_generate(one, M, workers), seed=seed, stream=stream,
                          meta={"sampler": "conjugate", "prior": prior.tolist()})


def weighted_bootstrap_draws(
    data: WeightedMicrodata,
    M: int = DEFAULT_DRAWS,
    seed: int = 0,
    stream: int = 0,
    workers: int = 1,
) -> PosteriorDraws:
    """Weighted Bayesian bootstrap.

    Each draw puts Dirichlet(1, ..., 1) masses on the N records, scales them
    by the sampling weights, renormalizes, and sums the masses by category.
    """
    M = _check_M(M)
    if not isinstance(data, WeightedMicrodata):
        raise DomainError("weighted_bootstrap_draws needs WeightedMicrodata")
    cats = data.categories - 1
    w = data.weights / data.weights.max()
    K = data.K

    def one(m):
        g = draw_rng(seed, m, stream).standard_exponential(data.N) * w
        p = np.bincount(cats, weights=g, minlength=K) / g.sum()
        return p / p.sum()

    log.debug("weighted_bootstrap_draws: K=%d N=%d M=%d seed=%d stream=%d", K, data.N, M, seed, stream)
    return PosteriorDraws(_generate(one, M, workers), seed=seed, stream=stream,
                          meta={"sampler": "weighted-bootstrap"})
