"""Level and inequality measures for ordinal categorical distributions.

Categories are ordered 1..K, with the labels themselves carrying no
cardinal meaning. Everything here depends on the probability vector only.

Two layers are provided:

* scalar functions (``cdf``, ``headcount``, ``cf_index``, ``gl_curve``,
  ``gl_eval``, ``j_index`` and the ``*_compare`` predicates) that take a
  single :class:`ProbabilityVector`;
* row kernels (``*_rows``) that take an ``(M, K)`` array of probability
  vectors and return one result per row. The scalar functions are thin
  wrappers over these, so a posterior summary over constant draws
  reproduces the scalar value exactly.
"""
from __future__ import annotations

import enum
from dataclasses import InitVar, dataclass, field

import numpy as np

from .errors import DimensionError, DomainError

SUM_ATOL = 1e-6
DEFAULT_GRID_STEP = 0.01

# (draws x grid x categories) elements per chunk in gl_rows
_GL_CHUNK_ELEMS = 2_000_000


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """K >= 2 ordered category probabilities.

    Inputs whose sum is within ``atol`` of one are renormalized; anything
    further off is rejected as a data error. The stored array is read-only.
    """

    probs: np.ndarray
    atol: InitVar[float] = SUM_ATOL

    def __post_init__(self, atol):
        arr = np.array(self.probs, dtype=float)
        if arr.ndim != 1:
            raise DimensionError(f"probabilities must be one-dimensional, got shape {arr.shape}")
        if arr.size < 2:
            raise DimensionError(f"need at least 2 categories, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("probabilities must be finite")
        if np.any(arr < 0):
            raise DomainError(f"negative probability in {arr.tolist()}")
        total = arr.sum()
        if abs(total - 1.0) > atol:
            raise DomainError(f"probabilities sum to {total!r}, not 1 (tolerance {atol})")
        arr = arr / total
        arr.flags.writeable = False
        object.__setattr__(self, "probs", arr)

    @property
    def K(self) -> int:
        return self.probs.size

    @property
    def is_degenerate(self) -> bool:
        return int(np.count_nonzero(self.probs)) == 1

    def __len__(self):
        return self.K

    def __eq__(self, other):
        if not isinstance(other, ProbabilityVector):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __repr__(self):
        return f"ProbabilityVector({np.array2string(self.probs, precision=4, separator=', ')})"


def as_probability_vector(p, atol: float = SUM_ATOL) -> ProbabilityVector:
    if isinstance(p, ProbabilityVector):
        return p
    return ProbabilityVector(p, atol=atol)


class Dominance(enum.Enum):
    X_DOMINATES = "X"
    Y_DOMINATES = "Y"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class GLCurve:
    """Piecewise-linear generalized Lorenz curve.

    ``u`` holds the breakpoints ``0, F(1), ..., F(K)`` and ``values`` the
    curve at those points. The slope on the segment ending at ``u[k]`` is
    ``u[k]`` itself (status of the category occupying that segment).
    """

    u: np.ndarray
    values: np.ndarray = field(repr=False)

    @property
    def endpoint(self) -> float:
        return float(self.values[-1])

    def breakpoints(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.u, self.values)]


# --------------------------------------------------------------------------
# row kernels

def _as_rows(P) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    if P.ndim == 1:
        P = P[None, :]
    if P.ndim != 2:
        raise DimensionError(f"expected an (M, K) array, got shape {P.shape}")
    return P


def cdf_rows(P) -> np.ndarray:
    """Row-wise cumulative sums, capped at 1 and ending at exactly 1."""
    F = np.minimum(np.cumsum(_as_rows(P), axis=1), 1.0)
    F[:, -1] = 1.0
    return F


def headcount_rows(P) -> np.ndarray:
    P = _as_rows(P)
    if P.shape[1] < 2:
        raise DimensionError("headcount needs at least 2 categories")
    # F(2); exactly 1 when K = 2
    return cdf_rows(P)[:, 1]


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 <= alpha < 1.0):
        raise DomainError(f"CF alpha must lie in [0, 1), got {alpha}")
    return alpha


def cf_rows(P, alpha: float) -> np.ndarray:
    P = _as_rows(P)
    alpha = _check_alpha(alpha)
    F = cdf_rows(P)
    live = P > 0
    # 0 * log 0 := 0; F(k) > 0 wherever p(k) > 0
    logF = np.log(np.where(live, F, 1.0))
    if alpha == 0.0:
        return -np.sum(P * logF, axis=1)
    # sum_k p(k) (F(k)^a - 1) == sum_k p(k) F(k)^a - 1, without cancellation near a = 0
    s = np.sum(P * np.expm1(alpha * logF), axis=1)
    return s / (alpha * (alpha - 1.0))


def gl_breakpoint_rows(P) -> tuple[np.ndarray, np.ndarray]:
    """Breakpoints ``(U, V)``, each of shape (M, K+1), starting at 0."""
    P = _as_rows(P)
    F = cdf_rows(P)
    M = P.shape[0]
    U = np.concatenate([np.zeros((M, 1)), F], axis=1)
    V = np.concatenate([np.zeros((M, 1)), np.cumsum(P * F, axis=1)], axis=1)
    return U, V


def j_rows(P) -> np.ndarray:
    P = _as_rows(P)
    _, V = gl_breakpoint_rows(P)
    return 1.0 - np.sum(P * (V[:, :-1] + V[:, 1:]), axis=1)


def gl_rows(P, grid) -> np.ndarray:
    """GL curve of every row evaluated at every grid point, shape (M, G).

    Uses GL(u) = sum_k F(k) * clip(u - F(k-1), 0, p(k)): each category adds
    its status times the part of its population interval lying below u.
    """
    P = _as_rows(P)
    grid = np.asarray(grid, dtype=float)
    F = cdf_rows(P)
    Fprev = F - P
    M, K = P.shape
    out = np.empty((M, grid.size))
    step = max(1, _GL_CHUNK_ELEMS // max(1, grid.size * K))
    for lo in range(0, M, step):
        hi = min(M, lo + step)
        covered = np.clip(grid[None, :, None] - Fprev[lo:hi, None, :], 0.0, P[lo:hi, None, :])
        out[lo:hi] = np.sum(covered * F[lo:hi, None, :], axis=2)
    return out


def default_grid(step: float = DEFAULT_GRID_STEP) -> np.ndarray:
    """Interior grid ``step, 2*step, ...`` strictly below 1 (0.01..0.99 by default)."""
    step = float(step)
    if not (0.0 < step <= 0.5):
        raise DomainError(f"grid step must lie in (0, 0.5], got {step}")
    n = int(np.floor(1.0 / step + 1e-9))
    grid = np.round(np.arange(1, n + 1) * step, 12)
    return grid[grid < 1.0]


def check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise DomainError("dominance grid is empty")
    if np.any(grid <= 0.0) or np.any(grid >= 1.0):
        raise DomainError("grid points must lie strictly inside (0, 1)")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("grid points must be strictly increasing")
    return grid


def classify_rows(le_x: np.ndarray, lt_x: np.ndarray, le_y: np.ndarray, lt_y: np.ndarray) -> np.ndarray:
    """Three-way classification from per-point comparison tables.

    ``le_x[m, j]`` says X is weakly better at point j in draw m and
    ``lt_x`` strictly better; likewise for Y. Returns +1 where X dominates,
    -1 where Y dominates, 0 otherwise.
    """
    x_dom = le_x.all(axis=1) & lt_x.any(axis=1)
    y_dom = le_y.all(axis=1) & lt_y.any(axis=1)
    return x_dom.astype(np.int8) - y_dom.astype(np.int8)


def _check_pair(PX, PY) -> tuple[np.ndarray, np.ndarray]:
    PX, PY = _as_rows(PX), _as_rows(PY)
    if PX.shape != PY.shape:
        raise DimensionError(f"shape mismatch: {PX.shape} vs {PY.shape}")
    return PX, PY


def fsd_rows(PX, PY) -> np.ndarray:
    PX, PY = _check_pair(PX, PY)
    FX, FY = cdf_rows(PX)[:, :-1], cdf_rows(PY)[:, :-1]
    return classify_rows(FX <= FY, FX < FY, FY <= FX, FY < FX)


def restricted_fsd_rows(PX, PY) -> np.ndarray:
    PX, PY = _check_pair(PX, PY)
    HX, HY = headcount_rows(PX), headcount_rows(PY)
    x_dom = (HX < HY) & (PX[:, 0] < PY[:, 0])
    y_dom = (HY < HX) & (PY[:, 0] < PX[:, 0])
    return x_dom.astype(np.int8) - y_dom.astype(np.int8)


def gld_rows(PX, PY, grid=None) -> np.ndarray:
    PX, PY = _check_pair(PX, PY)
    grid = default_grid() if grid is None else check_grid(grid)
    GX, GY = gl_rows(PX, grid), gl_rows(PY, grid)
    return classify_rows(GX >= GY, GX > GY, GY >= GX, GY > GX)


_OUTCOME = {1: Dominance.X_DOMINATES, -1: Dominance.Y_DOMINATES, 0: Dominance.NONE}


# --------------------------------------------------------------------------
# scalar API

def cdf(p) -> np.ndarray:
    p = as_probability_vector(p)
    F = cdf_rows(p.probs)[0]
    F.flags.writeable = False
    return F


def headcount(p) -> float:
    """Share of the population in the bottom two categories."""
    return float(headcount_rows(as_probability_vector(p).probs)[0])


def cf_index(p, alpha: float) -> float:
    """Downward-looking Cowell-Flachaire index for ``0 <= alpha < 1``.

    Each person's status is the CDF value of their category; the index
    aggregates the gap between status and 1. Smaller ``alpha`` weights low
    status more heavily.
    """
    return float(cf_rows(as_probability_vector(p).probs, alpha)[0])


def gl_curve(p) -> GLCurve:
    U, V = gl_breakpoint_rows(as_probability_vector(p).probs)
    u, v = U[0], V[0]
    u.flags.writeable = False
    v.flags.writeable = False
    return GLCurve(u, v)


def gl_eval(curve: GLCurve, u):
    """Evaluate a GL curve by interpolating between its breakpoints.

    Accepts a scalar or an array of population proportions in [0, 1].
    """
    x = np.asarray(u, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError(f"u must lie in [0, 1], got {u!r}")
    bu, bv = curve.u, curve.values
    K = bu.size - 1
    idx = np.clip(np.searchsorted(bu, x, side="right") - 1, 0, K - 1)
    val = bv[idx] + (x - bu[idx]) * bu[idx + 1]
    val = np.where(x == 1.0, bv[-1], val)
    return float(val) if val.ndim == 0 else val


def j_index(p) -> float:
    """Jenkins index: twice the area between the 45-degree line and the GL curve."""
    return float(j_rows(as_probability_vector(p).probs)[0])


def _pair(pX, pY) -> tuple[ProbabilityVector, ProbabilityVector]:
    pX, pY = as_probability_vector(pX), as_probability_vector(pY)
    if pX.K != pY.K:
        raise DimensionError(f"category counts differ: {pX.K} vs {pY.K}")
    return pX, pY


def fsd_compare(pX, pY) -> Dominance:
    """First-order stochastic dominance: X dominates if its CDF is weakly
    below Y's at every k < K and strictly below somewhere."""
    pX, pY = _pair(pX, pY)
    return _OUTCOME[int(fsd_rows(pX.probs, pY.probs)[0])]


def restricted_fsd_compare(pX, pY) -> Dominance:
    """Dominance over the bottom two categories only: smaller p(1) and
    smaller headcount, both strict."""
    pX, pY = _pair(pX, pY)
    return _OUTCOME[int(restricted_fsd_rows(pX.probs, pY.probs)[0])]


def gld_compare(pX, pY, grid=None) -> Dominance:
    """Generalized Lorenz dominance checked on ``grid`` (default 0.01..0.99)."""
    pX, pY = _pair(pX, pY)
    return _OUTCOME[int(gld_rows(pX.probs, pY.probs, grid)[0])]
