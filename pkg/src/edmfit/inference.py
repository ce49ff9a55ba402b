"""Empirical statistics and maximum-likelihood fitting of count data.

Fits hold the mean parameter at the sample mean and maximize the
loglikelihood over the dispersion parameter p (ABM, LMNS) or the pair
(p, b) (LMS) with derivative-free searches on log-transformed
coordinates.  Model selection over the variance-function power r keeps
the fit with the highest chi-square p-value.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import gof
from .distributions import (
    Baseline,
    BaselineSpec,
    ModelSpec,
    baseline_pmf,
    pmf_values,
)
from .errors import DomainError, EdmError, NonConvergenceError, PrecisionError
from .gof import GofReport, PoolingRule
from .series import ClassId, VarianceParams

log = logging.getLogger(__name__)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CountDataset:
    """An observed frequency table over counts 0..K.

    ``open_tail`` marks the last category as "K or more".
    """

    name: str
    frequencies: tuple[int, ...]
    open_tail: bool = False

    def __post_init__(self):
        if len(self.frequencies) == 0:
            raise DomainError("dataset needs at least one category")
        if any(f < 0 or f != int(f) for f in self.frequencies):
            raise DomainError("frequencies must be nonnegative integers")
        if sum(self.frequencies) <= 0:
            raise DomainError("dataset holds no observations")

    @classmethod
    def from_pairs(cls, name, pairs, open_tail=False) -> "CountDataset":
        """Build from (count, frequency) pairs; counts must run 0..K."""
        ks = [k for k, _ in pairs]
        if ks != list(range(len(ks))):
            raise DomainError(f"counts must be contiguous from 0, got {ks}")
        return cls(name, tuple(int(n) for _, n in pairs), open_tail)

    @property
    def n_obs(self) -> int:
        return int(sum(self.frequencies))

    @property
    def k_max(self) -> int:
        return len(self.frequencies) - 1


@dataclass(frozen=True)
class EmpiricalStats:
    """Moment summary of a count dataset."""

    n_obs: int
    mean: float
    variance: float
    m3: float
    skewness: float
    dispersion: float
    zero_fraction: float


def empirical_stats(data: CountDataset) -> EmpiricalStats:
    """Sample mean, variance (N-1 corrected), third moment, skewness, D, p0.

    An open tail with observations in it leaves the moments undefined, so
    that case is refused; an open tail with zero count is harmless.
    """
    n = data.n_obs
    if n < 2:
        raise DomainError("need at least two observations for sample moments")
    if data.open_tail and data.frequencies[-1] > 0:
        raise DomainError(
            "open-tail category holds observations; sample moments are undefined"
        )
    ks = np.arange(len(data.frequencies), dtype=float)
    nk = np.asarray(data.frequencies, dtype=float)
    mean = float(np.dot(ks, nk) / n)
    centered = ks - mean
    s2 = float(np.dot(centered**2, nk) / (n - 1))
    m3 = float(np.dot(centered**3, nk) / n)
    b1 = m3 / s2**1.5 if s2 > 0 else 0.0
    disp = s2 / mean if mean > 0 else 0.0
    return EmpiricalStats(
        n_obs=n,
        mean=mean,
        variance=s2,
        m3=m3,
        skewness=b1,
        dispersion=disp,
        zero_fraction=data.frequencies[0] / n,
    )


def loglikelihood(spec: ModelSpec, data: CountDataset, precision: str = "double") -> float:
    """Sum of n_k * log f(k); an open tail contributes the complement mass.

    Returns -inf when any observed category has zero (or negative)
    probability under the model.
    """
    k_top = data.k_max
    f = pmf_values(spec, k_top, precision)
    head = float(f.sum())
    if head > 1 + 1e-6:
        raise PrecisionError(
            f"pmf mass {head!r} over the observed range exceeds 1; "
            "kernel values are corrupt"
        )
    return _loglik_from_probs(f, data)


def _loglik_from_probs(f: np.ndarray, data: CountDataset) -> float:
    nk = data.frequencies
    k_top = data.k_max
    total = 0.0
    head = range(k_top) if data.open_tail else range(k_top + 1)
    for k in head:
        if nk[k] == 0:
            continue
        if not f[k] > 0 or not math.isfinite(f[k]):
            return -math.inf
        total += nk[k] * math.log(f[k])
    if data.open_tail and nk[k_top] > 0:
        tail = 1.0 - float(f[:k_top].sum())
        if not tail > 0:
            return -math.inf
        total += nk[k_top] * math.log(tail)
    return total


@dataclass(frozen=True)
class FitConfig:
    """Optimizer and scoring knobs shared by all fits."""

    r_max: int = 9
    u_tol: float = 1e-8
    start_factors: tuple[float, ...] = (1.0, 10.0, 100.0)
    max_bracket_steps: int = 60
    u_span: float = 60.0  # widest log-coordinate excursion from a start
    pooling: PoolingRule = field(default_factory=PoolingRule)
    precision: str = "double"

    def __post_init__(self):
        if self.r_max < 1:
            raise DomainError(f"r_max must be >= 1, got {self.r_max}")
        if not self.u_tol > 0:
            raise DomainError("u_tol must be positive")


@dataclass(frozen=True)
class FitResult:
    """A fitted model with its expected counts and scorecard."""

    spec: object
    loglik: float
    expected: np.ndarray
    gof: GofReport
    converged: bool
    evaluations: int

    @property
    def p_value(self) -> float:
        return self.gof.p_value


def _golden_max(f, lo: float, hi: float, tol: float):
    """Golden-section maximum of f on [lo, hi]; returns (u, f(u), evals)."""
    evals = 0
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    evals += 2
    while hi - lo > tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
        evals += 1
    u = (lo + hi) / 2.0
    return u, f(u), evals + 1


def _bracket_max(f, u0: float, max_steps: int):
    """Expand around u0 until an interior maximum is bracketed.

    Returns (lo, hi, evals, ok); ok is False when the function keeps
    rising to the expansion limit (no interior maximum found).
    """
    step = 1.0
    fa, fb, fc = f(u0 - step), f(u0), f(u0 + step)
    evals = 3
    if fb >= fa and fb >= fc:
        return u0 - step, u0 + step, evals, True
    if fc > fb:
        lo, mid, hi = u0, u0 + step, u0 + 2 * step
        fmid = fc
        direction = 1.0
    else:
        lo, mid, hi = u0, u0 - step, u0 - 2 * step
        fmid = fa
        direction = -1.0
    for _ in range(max_steps):
        fhi = f(hi)
        evals += 1
        if fhi <= fmid:
            a, b = sorted((lo, hi))
            return a, b, evals, True
        lo = mid
        mid, fmid = hi, fhi
        step *= 1.6
        hi = mid + direction * step
    a, b = sorted((lo, hi))
    return a, b, evals, False


def _maximize_1d(f, starts, tol, max_steps):
    """Best of several bracketed golden-section searches.

    Returns (u, value, evals, converged); falls back to the best endpoint
    seen when no start brackets a maximum.
    """
    best = None
    total_evals = 0
    any_converged = False
    for u0 in starts:
        lo, hi, evals, ok = _bracket_max(f, u0, max_steps)
        total_evals += evals
        if ok:
            u, fu, evals2 = _golden_max(f, lo, hi, tol)
            total_evals += evals2
            any_converged = True
        else:
            flo, fhi = f(lo), f(hi)
            u, fu = (hi, fhi) if fhi >= flo else (lo, flo)
            total_evals += 2
        if best is None or fu > best[1]:
            best = (u, fu)
    return best[0], best[1], total_evals, any_converged


def _expected_counts(spec, data: CountDataset, precision: str) -> np.ndarray:
    """N * f(k) per category; an open tail aggregates the complement mass."""
    n = data.n_obs
    k_top = data.k_max
    f = pmf_values(spec, k_top, precision)
    expected = n * f
    if data.open_tail:
        expected[k_top] = n * (1.0 - float(f[:k_top].sum()))
    return expected


def _finish_fit(spec, data, cfg, n_params, loglik_val, evals, converged) -> FitResult:
    expected = _expected_counts(spec, data, cfg.precision)
    report = gof.score(data.frequencies, expected, n_params, cfg.pooling)
    return FitResult(
        spec=spec,
        loglik=loglik_val,
        expected=expected,
        gof=report,
        converged=converged,
        evaluations=evals,
    )


def fit_mle(
    family: ClassId, r: int, data: CountDataset, cfg: FitConfig | None = None
) -> FitResult:
    """Maximum-likelihood fit with the mean held at the sample mean.

    ABM and LMNS search p on a log coordinate (LMNS on log(p - mean) to
    respect the finite mean domain); LMS runs a Nelder-Mead simplex on
    (log p, log b).  Starts are deterministic multiples of the sample mean.
    """
    cfg = cfg or FitConfig()
    stats = empirical_stats(data)
    m = stats.mean
    if not m > 0:
        raise DomainError("sample mean must be positive to fit")
    counter = [0]

    def loglik_at(p: float, b: float | None = None) -> float:
        counter[0] += 1
        try:
            spec = ModelSpec(VarianceParams(family, r, p, b), m)
            return loglikelihood(spec, data, cfg.precision)
        except EdmError:
            return -math.inf

    if family is ClassId.LMS:
        best = None
        converged = False
        for s in cfg.start_factors:
            x0 = np.array([math.log(s * m), math.log(4.0 * s * m)])
            res = optimize.minimize(
                lambda v: -loglik_at(math.exp(v[0]), math.exp(v[1])),
                x0,
                method="Nelder-Mead",
                options={
                    "xatol": cfg.u_tol,
                    "fatol": 1e-10,
                    "maxiter": 4000,
                    "maxfev": 4000,
                },
            )
            cand = (-res.fun, math.exp(res.x[0]), math.exp(res.x[1]), bool(res.success))
            converged = converged or cand[3]
            if best is None or cand[0] > best[0]:
                best = cand
        ll, p_hat, b_hat = best[0], best[1], best[2]
        spec = ModelSpec(VarianceParams(family, r, p_hat, b_hat), m)
    else:
        if family is ClassId.LMNS:
            to_p = lambda u: m + math.exp(u)
        else:
            to_p = lambda u: math.exp(u)
        starts = [math.log(s * m) for s in cfg.start_factors]
        u_hat, ll, _, converged = _maximize_1d(
            lambda u: loglik_at(to_p(u)), starts, cfg.u_tol, cfg.max_bracket_steps
        )
        p_hat = to_p(u_hat)
        spec = ModelSpec(VarianceParams(family, r, p_hat), m)

    if not math.isfinite(ll):
        raise NonConvergenceError(
            f"no finite loglikelihood found for {family.value} r={r} on {data.name}"
        )
    result = _finish_fit(
        spec, data, cfg, family.n_fit_params, ll, counter[0], converged
    )
    if not converged:
        raise NonConvergenceError(
            f"no optimizer start converged for {family.value} r={r} on {data.name}",
            incumbent=result,
        )
    return result


def select_model(family: ClassId, data: CountDataset, cfg: FitConfig | None = None) -> FitResult:
    """Fit every power r in the family's range and keep the highest p-value.

    Ties keep the smaller r; powers whose fit fails are skipped and logged.
    """
    cfg = cfg or FitConfig()
    if cfg.r_max < family.min_power:
        raise DomainError(
            f"r_max={cfg.r_max} below the minimum power {family.min_power} of {family.value}"
        )
    best: FitResult | None = None
    failures: list[tuple[int, str]] = []
    for r in range(family.min_power, cfg.r_max + 1):
        try:
            fit = fit_mle(family, r, data, cfg)
        except EdmError as err:
            failures.append((r, str(err)))
            log.info("select_model: skipping %s r=%d on %s: %s", family.value, r, data.name, err)
            continue
        if best is None or fit.p_value > best.p_value:
            best = fit
    if best is None:
        raise NonConvergenceError(
            f"every power of {family.value} failed on {data.name}: {failures}"
        )
    return best


def fit_baseline(kind: Baseline, data: CountDataset, cfg: FitConfig | None = None) -> FitResult:
    """Poisson (no free dispersion) or negative binomial (p by MLE) fit."""
    cfg = cfg or FitConfig()
    stats = empirical_stats(data)
    m = stats.mean
    k_top = data.k_max
    counter = [0]

    def probs_for(p: float | None) -> np.ndarray:
        table = baseline_pmf(kind, m, p, eps=1e-14, max_terms=10_000)
        f = table.probs
        if len(f) <= k_top:
            f = np.concatenate([f, np.zeros(k_top + 1 - len(f))])
        return f[: k_top + 1]

    if kind is Baseline.POISSON:
        spec = BaselineSpec(kind, m)
        f = probs_for(None)
        ll = _loglik_from_probs(f, data)
        evals, converged, n_params = 1, True, 1
    else:

        def loglik_at(u: float) -> float:
            counter[0] += 1
            try:
                return _loglik_from_probs(probs_for(math.exp(u)), data)
            except EdmError:
                return -math.inf

        starts = [math.log(s * m) for s in cfg.start_factors]
        u_hat, ll, _, converged = _maximize_1d(
            loglik_at, starts, cfg.u_tol, cfg.max_bracket_steps
        )
        spec = BaselineSpec(kind, m, math.exp(u_hat))
        f = probs_for(spec.p)
        evals, n_params = counter[0], 2
        if not converged:
            raise NonConvergenceError(
                f"negative binomial fit did not converge on {data.name}"
            )

    n = data.n_obs
    expected = n * f
    if data.open_tail:
        expected[k_top] = n * (1.0 - float(f[:k_top].sum()))
    report = gof.score(data.frequencies, expected, n_params, cfg.pooling)
    return FitResult(spec, ll, expected, report, converged, evals)
