"""Probability mass functions built on the kernel sequences.

A model is a variance-function parameter set plus a mean value; its pmf is

    f(n) = mu_n * exp(n * psi(m) - psi1(m)),    n = 0, 1, ...

psi is evaluated in the log-separated form psi(m) = psi0(m) + log(m), so
the removable singularity at m = 0 never enters.  Tables are truncated by
a mass-accumulation rule: terms are added until total mass reaches
1 - eps or a hard term cap trips.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import series
from .errors import DomainError, PrecisionError, TailCapError
from .series import ClassId, VarianceParams

DEFAULT_EPS = 1e-10
DEFAULT_MAX_TERMS = 400
_MASS_EXCESS = 1e-6


@dataclass(frozen=True)
class ModelSpec:
    """A fully parameterized distribution: variance-function params plus mean."""

    params: VarianceParams
    m: float

    def __post_init__(self):
        if not self.m > 0 or not math.isfinite(self.m):
            raise DomainError(f"mean m must be positive and finite, got {self.m!r}")
        if self.params.family is ClassId.LMNS and not self.m < self.params.p:
            raise DomainError(
                f"lmns mean domain is (0, p): m={self.m!r} violates m < p={self.params.p!r}"
            )


class Baseline(Enum):
    """Analytic reference families for comparison fits."""

    POISSON = "poisson"
    NEG_BINOMIAL = "nb"


@dataclass(frozen=True)
class BaselineSpec:
    """Parameterization of an analytic baseline pmf (mean m, NB dispersion p)."""

    kind: Baseline
    m: float
    p: float | None = None

    def __post_init__(self):
        if not self.m > 0:
            raise DomainError(f"mean m must be positive, got {self.m!r}")
        if self.kind is Baseline.NEG_BINOMIAL and (self.p is None or not self.p > 0):
            raise DomainError("negative binomial baseline requires p > 0")


@dataclass(frozen=True)
class PmfTable:
    """pmf values f(0)..f(N) and the mass left beyond the last term."""

    model: object
    probs: np.ndarray
    tail_mass: float


def variance_function(spec: ModelSpec) -> float:
    """V(m) for the model's family at its mean."""
    p, r, m = spec.params.p, spec.params.r, spec.m
    if spec.params.family is ClassId.ABM:
        return m * (1 + m / p) ** r
    if spec.params.family is ClassId.LMS:
        return m * (1 + m / spec.params.b) * (1 + m / p) ** r
    return m / (1 - m / p) ** r


def psi_functions(spec: ModelSpec) -> tuple[float, float, float]:
    """(psi(m), psi0(m), psi1(m)) with boundary constants included."""
    cs = series.coefficients(spec.params)
    coef = (list(cs.c), list(cs.d), cs.c0, cs.d0)
    psi0, psi1 = series._psi_raw(spec.params, coef, spec.m, math.log)
    return psi0 + math.log(spec.m), psi0, psi1


def _psi_pair_mp(spec: ModelSpec):
    """(psi0, psi1) at 50 digits; survives the LMS near-ridge cancellation.

    The partial-fraction constants of the LMS primitives carry factors
    (p/(p-b))**r that cancel in the final values, so evaluating them in
    doubles loses accuracy long before the singularity band itself.
    """
    from mpmath import mp

    with mp.workdps(series.EXTENDED_DPS):
        coef = series._coef_raw(
            spec.params, series.DEFAULT_SINGULAR_TOL, mp.mpf(1), mp.log
        )
        return series._psi_raw(spec.params, coef, mp.mpf(spec.m), mp.log)


def _pmf_terms(spec: ModelSpec, precision: str):
    """Yield f(0), f(1), ... for the model (no truncation rule)."""
    if precision == "extended" or spec.params.family is ClassId.LMS:
        from mpmath import mp

        with mp.workdps(series.EXTENDED_DPS):
            psi0, psi1 = _psi_pair_mp(spec)
            scale = mp.exp(psi0 + mp.log(spec.m))
            zero_term = mp.exp(-psi1)
        kernel_precision = precision
        for nu in series.iter_scaled_kernel(spec.params, scale, kernel_precision):
            yield float(zero_term * nu)
    else:
        psi, _, psi1 = psi_functions(spec)
        scale = math.exp(psi)
        zero_term = math.exp(-psi1)
        for nu in series.iter_scaled_kernel(spec.params, scale, precision):
            yield zero_term * nu


def pmf_values(spec: ModelSpec, kmax: int, precision: str = "double") -> np.ndarray:
    """f(0)..f(kmax) with no stopping rule (fitting needs a fixed range)."""
    if kmax < 0:
        raise DomainError(f"kmax must be >= 0, got {kmax}")
    gen = _pmf_terms(spec, precision)
    return np.fromiter((next(gen) for _ in range(kmax + 1)), dtype=float, count=kmax + 1)


def _accumulate(model, terms, eps: float, max_terms: int) -> PmfTable:
    if not 0 < eps < 1:
        raise DomainError(f"eps must be in (0, 1), got {eps!r}")
    probs: list[float] = []
    total = 0.0
    for f in terms:
        probs.append(f)
        total += f
        if total > 1 + _MASS_EXCESS:
            raise PrecisionError(
                f"accumulated pmf mass {total!r} exceeds 1; kernel values are corrupt",
                n=len(probs) - 1,
            )
        if total >= 1 - eps:
            return PmfTable(model, np.asarray(probs), 1.0 - total)
        if len(probs) >= max_terms + 1:
            raise TailCapError(
                f"pmf tail still holds {1 - total:.3e} mass after {max_terms} terms",
                accumulated=total,
            )
    raise AssertionError("pmf term stream ended unexpectedly")


def pmf_table(
    spec: ModelSpec,
    eps: float = DEFAULT_EPS,
    max_terms: int = DEFAULT_MAX_TERMS,
    precision: str = "double",
) -> PmfTable:
    """Table of pmf values extended until mass >= 1 - eps or the cap trips."""
    return _accumulate(spec, _pmf_terms(spec, precision), eps, max_terms)


def numeric_moments(table: PmfTable) -> tuple[float, float]:
    """(mean, variance) of a table whose tail is numerically negligible."""
    if not table.tail_mass < 1e-8:
        raise DomainError(
            f"tail mass {table.tail_mass:.3e} too heavy for trustworthy moments"
        )
    ns = np.arange(len(table.probs), dtype=float)
    mean = float(np.dot(ns, table.probs))
    var = float(np.dot((ns - mean) ** 2, table.probs))
    return mean, var


def _poisson_terms(m: float):
    log_m = math.log(m)
    n = 0
    while True:
        yield math.exp(n * log_m - m - math.lgamma(n + 1))
        n += 1


def _neg_binomial_terms(m: float, p: float):
    # Parameterized so the variance is m * (1 + m/p): size p, success p/(p+m).
    log_q = math.log(m / (p + m))
    base = p * math.log(p / (p + m)) - math.lgamma(p)
    n = 0
    while True:
        yield math.exp(math.lgamma(n + p) - math.lgamma(n + 1) + base + n * log_q)
        n += 1


def baseline_pmf(
    kind: Baseline,
    m: float,
    p: float | None = None,
    eps: float = DEFAULT_EPS,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> PmfTable:
    """Closed-form Poisson or negative binomial table with mean m.

    The negative binomial is parameterized so its variance is m * (1 + m/p),
    the r = 1 member of the ABM variance family.
    """
    model = BaselineSpec(kind, m, p)
    if kind is Baseline.POISSON:
        terms = _poisson_terms(m)
    else:
        terms = _neg_binomial_terms(m, model.p)
    return _accumulate(model, terms, eps, max_terms)
