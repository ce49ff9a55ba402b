"""Goodness-of-fit scoring: cell pooling, chi-square, p-values, RMSE.

Pooling merges sparse trailing categories until every cell's expected
count clears a threshold (or an explicit cut index overrides).  The
chi-square statistic then treats the final cell as the open tail of the
multinomial: its expected count is the total observation count minus the
expected counts of the head cells, so the cells partition the model's
whole support.  RMSE is always computed on the unpooled categories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientCellsError


@dataclass(frozen=True)
class PoolingRule:
    """Tail-merging policy for chi-square cells.

    ``explicit_cut`` pools all categories at or beyond that index into one
    cell regardless of the threshold.
    """

    min_expected: float = 1.0
    explicit_cut: int | None = None

    def __post_init__(self):
        if not self.min_expected > 0:
            raise DomainError(f"min_expected must be positive, got {self.min_expected!r}")
        if self.explicit_cut is not None and self.explicit_cut < 1:
            raise DomainError(f"explicit_cut must be >= 1, got {self.explicit_cut!r}")


@dataclass(frozen=True)
class GofReport:
    """Chi-square scorecard; ``rmse`` is filled by the full scorer."""

    chi2: float
    df: int
    p_value: float
    cells: str
    n_params: int
    rmse: float | None = None


@dataclass(frozen=True)
class PooledCells:
    observed: np.ndarray
    expected: np.ndarray
    labels: tuple[str, ...]

    @property
    def description(self) -> str:
        return "|".join(self.labels)


def pool_cells(
    observed,
    expected,
    rule: PoolingRule,
    min_cells: int = 2,
) -> PooledCells:
    """Merge trailing categories until every cell's expected >= threshold.

    Order-preserving; observed and expected sums are preserved exactly.
    Merging stops rather than shrink below ``min_cells``.  With
    ``explicit_cut`` set, categories at or beyond the cut index form the
    single tail cell and the threshold is ignored.
    """
    obs = np.asarray(observed, dtype=float)
    exp = np.asarray(expected, dtype=float)
    if obs.shape != exp.shape or obs.ndim != 1:
        raise DomainError("observed and expected must be 1-d vectors of equal length")
    k = len(obs)
    if k == 0:
        raise DomainError("cannot pool empty vectors")
    if rule.explicit_cut is not None:
        cut = min(rule.explicit_cut, k - 1)
    else:
        cut = k - 1  # index of the first category inside the tail cell
        while cut > 0 and cut + 1 > min_cells:
            cells_exp = np.concatenate([exp[:cut], [exp[cut:].sum()]])
            if cells_exp.min() >= rule.min_expected:
                break
            cut -= 1
    pooled_obs = np.concatenate([obs[:cut], [obs[cut:].sum()]])
    pooled_exp = np.concatenate([exp[:cut], [exp[cut:].sum()]])
    labels = tuple(str(i) for i in range(cut)) + (f"{cut}+" if cut < k - 1 else str(cut),)
    return PooledCells(pooled_obs, pooled_exp, labels)


def chi_square(observed, expected, n_params: int, rule: PoolingRule) -> GofReport:
    """Pool cells, then score chi-square with tail-complement expecteds.

    The last pooled cell's expected count is replaced by
    ``sum(observed) - sum(head expecteds)`` so the cells cover all model
    mass, not just the tabulated categories.  df = cells - 1 - n_params.
    """
    obs = np.asarray(observed, dtype=float)
    exp = np.asarray(expected, dtype=float)
    min_cells = n_params + 2
    if len(obs) < min_cells:
        raise InsufficientCellsError(
            f"need at least {min_cells} cells for {n_params} fitted parameters, "
            f"got {len(obs)} categories"
        )
    pooled = pool_cells(obs, exp, rule, min_cells=min_cells)
    cells = len(pooled.observed)
    if cells < min_cells:
        raise InsufficientCellsError(
            f"pooling left {cells} cells; need at least {min_cells} "
            f"for {n_params} fitted parameters"
        )
    e = pooled.expected.copy()
    e[-1] = obs.sum() - e[:-1].sum()
    if e.min() <= 0:
        raise InsufficientCellsError(
            "a pooled cell has nonpositive expected count; widen the pooling rule"
        )
    chi2 = float(((pooled.observed - e) ** 2 / e).sum())
    df = cells - 1 - n_params
    return GofReport(
        chi2=chi2,
        df=df,
        p_value=chi2_sf(chi2, df),
        cells=pooled.description,
        n_params=n_params,
    )


def rmse(observed, expected) -> float:
    """Root mean squared error over the unpooled categories."""
    obs = np.asarray(observed, dtype=float)
    exp = np.asarray(expected, dtype=float)
    if obs.shape != exp.shape:
        raise DomainError("observed and expected must have equal length")
    return float(np.sqrt(np.mean((obs - exp) ** 2)))


def score(observed, expected, n_params: int, rule: PoolingRule) -> GofReport:
    """Complete scorecard: pooled chi-square plus unpooled RMSE."""
    partial = chi_square(observed, expected, n_params, rule)
    return GofReport(
        chi2=partial.chi2,
        df=partial.df,
        p_value=partial.p_value,
        cells=partial.cells,
        n_params=partial.n_params,
        rmse=rmse(observed, expected),
    )


# ---------------------------------------------------------------------------
# Chi-square survival function via the regularized incomplete gamma,
# series for x < df + 1 and continued fraction otherwise (Numerical
# Recipes style).  Implemented here so p-values carry no external
# special-function dependency.
# ---------------------------------------------------------------------------

_GAMMA_TOL = 1e-15
_GAMMA_MAX_ITER = 500


def _lower_gamma_series(a: float, x: float) -> float:
    """P(a, x) by series; converges fast for x < a + 1."""
    if x == 0.0:
        return 0.0
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_GAMMA_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_TOL:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _upper_gamma_cf(a: float, x: float) -> float:
    """Q(a, x) by continued fraction; converges fast for x >= a + 1."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_TOL:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def chi2_sf(x: float, df: int) -> float:
    """Survival function of the chi-square distribution with ``df`` degrees.

    Equals 1 - P(df/2, x/2) with P the regularized lower incomplete gamma;
    absolute error below 1e-10 over the scored range.
    """
    if not isinstance(df, (int, np.integer)) or df < 1:
        raise DomainError(f"df must be a positive integer, got {df!r}")
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x!r}")
    if x == 0.0:
        return 1.0
    a = df / 2.0
    half = x / 2.0
    if half < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _lower_gamma_series(a, half)))
    return min(1.0, max(0.0, _upper_gamma_cf(a, half)))
