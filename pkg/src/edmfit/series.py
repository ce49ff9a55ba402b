"""Variance-function classes and their discrete kernel sequences.

Three families of count distributions on the nonnegative integers are
defined through the variance function of their mean parameterization:

    ABM    V(m) = m * (1 + m/p)**r          r >= 2, p > 0
    LMS    V(m) = m * (1 + m/b) * (1 + m/p)**r    r >= 1, p, b > 0, p != b
    LMNS   V(m) = m / (1 - m/p)**r          r >= 1, mean domain (0, p)

For each family the antiderivatives of 1/V and m/V have closed forms,

    psi(m)  = psi0(m) + log(m),    psi1(m),

with integration constants c0, d0 pinned by the boundary conditions
psi1(0) = 0 and lim_{m->0} m * exp(-psi(m)) = 1.  The base-measure
weights mu_n then come from the (n-1)-st Taylor coefficient of
exp(H_n(m)) around m = 0, where

    H_n(m) = psi1(m) + log(psi1'(m)) - n * psi0(m),    H_n(0) = 0.

H_n is a linear combination (the q-vector) of a small per-family basis
whose scaled derivatives at zero, h(i, j) = (d/dm)^j basis_i |_0 / j!,
are closed forms.  Writing b_j = H_n^(j)(0)/j!, the Taylor coefficients
a_k of exp(H_n) satisfy

    a_0 = 1,    a_k = (1/k) * sum_{j=1}^{k} j * b_j * a_{k-j},

and mu_n = a_{n-1} / n, with mu_0 = mu_1 = 1.  That recurrence is the
production path.  The independent cross-check evaluates the same
coefficient via the explicit sum over integer-partition multiplicity
vectors of n - 1 (``kernel_mu_oracle``).

All arithmetic is double precision by default; ``precision="extended"``
reruns a computation in 50-digit software floats, which rescues the
alternating-sign cancellation that can break positivity for large n * r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DomainError,
    OracleCapError,
    PrecisionError,
    SingularParametersError,
)
from .partitions import enumerate_partitions

DEFAULT_SINGULAR_TOL = 1e-6
ORACLE_DEFAULT_CAP = 20
EXTENDED_DPS = 50

_PRECISIONS = ("double", "extended")


class ClassId(Enum):
    """The closed enumeration of supported variance-function families."""

    ABM = "abm"
    LMS = "lms"
    LMNS = "lmns"

    @property
    def min_power(self) -> int:
        """Smallest power r the family's kernel machinery supports."""
        return 2 if self is ClassId.ABM else 1

    @property
    def n_fit_params(self) -> int:
        """Parameters estimated from data when fitting: (m, p) or (m, p, b)."""
        return 3 if self is ClassId.LMS else 2


@dataclass(frozen=True)
class VarianceParams:
    """A fully parameterized variance function.

    ``b`` is the second dispersion parameter of the LMS family and must be
    left ``None`` for the other two families.
    """

    family: ClassId
    r: int
    p: float
    b: float | None = None

    def __post_init__(self):
        if not isinstance(self.r, int) or isinstance(self.r, bool):
            raise DomainError(f"power r must be an integer, got {self.r!r}")
        if self.r < self.family.min_power:
            raise DomainError(
                f"{self.family.value} requires r >= {self.family.min_power}, got r={self.r}"
            )
        if not self.p > 0 or not math.isfinite(self.p):
            raise DomainError(
                f"dispersion parameter p must be positive and finite, got {self.p!r}"
            )
        if self.family is ClassId.LMS:
            if self.b is None or not self.b > 0 or not math.isfinite(self.b):
                raise DomainError("lms requires a positive finite second dispersion parameter b")
            if self.p == self.b:
                raise SingularParametersError("lms requires p != b")
        elif self.b is not None:
            raise DomainError(f"{self.family.value} does not take a b parameter")

    @property
    def basis_size(self) -> int:
        """Number of non-constant basis functions in H_n for this family."""
        if self.family is ClassId.ABM:
            return self.r
        if self.family is ClassId.LMS:
            return self.r + 1
        return self.r + 2


@dataclass(frozen=True)
class CoefficientSet:
    """Integration constants of the psi primitives for one parameter set.

    ``c`` holds c_1..c_s where s is r (ABM), r+1 (LMS) or r (LMNS).
    ``d`` holds d_1..d_{r-1} for ABM (only the last entry is nonzero),
    d_1..d_{r+1} for LMS, and the single d_{r+1} for LMNS.
    ``c0 = -psi0~(0)`` and ``d0 = -psi1~(0)`` pin the boundary conditions.
    """

    c: tuple[float, ...]
    d: tuple[float, ...]
    c0: float
    d0: float


@dataclass(frozen=True)
class QVector:
    """Coefficients of H_n over the family basis; ``q[0]`` is the constant."""

    n: int
    q: tuple[float, ...]


@dataclass(frozen=True)
class HDerivScaled:
    """Scaled derivatives of H_n at zero: ``values[j-1] = H_n^(j)(0)/j!``."""

    n: int
    values: tuple[float, ...]


@dataclass(frozen=True)
class KernelTable:
    """Kernel sequence mu_0..mu_N for one parameter set."""

    params: VarianceParams
    mu: np.ndarray


def _check_precision(precision: str) -> None:
    if precision not in _PRECISIONS:
        raise DomainError(f"precision must be one of {_PRECISIONS}, got {precision!r}")


# ---------------------------------------------------------------------------
# Coefficient systems.  The scalar helpers below are written generically so
# the same formula lines serve both double (float) and extended (mpmath)
# arithmetic; ``one`` fixes the scalar type and ``ln`` the matching log.
# ---------------------------------------------------------------------------


def _coef_raw(params: VarianceParams, singular_tol: float, one, ln):
    r = params.r
    p = one * params.p
    if params.family is ClassId.ABM:
        c = [p**i / i for i in range(1, r)] + [-one]
        d = [0 * one] * (r - 2) + [-(p**r) / (r - 1)]
        c0 = ln(p) - sum(one / i for i in range(1, r))
        d0 = p / (r - 1)
        return c, d, c0, d0
    if params.family is ClassId.LMS:
        b = one * params.b
        if abs(params.p - params.b) / max(params.p, params.b) < singular_tol:
            raise SingularParametersError(
                f"lms parameters p={params.p!r}, b={params.b!r} are within the "
                f"singularity band |p-b|/max(p,b) < {singular_tol:g}"
            )
        w = p / (p - b)
        c = [(p**i / i) * (1 - w ** (r - i)) for i in range(1, r)]
        c += [w**r - 1, -(w**r)]
        d = [b * (p**i / i) * w ** (r - i) for i in range(1, r)]
        d += [-b * w**r, b * w**r]
        c0 = -(
            sum(c[i - 1] * p**-i for i in range(1, r)) + c[r - 1] * ln(p) + c[r] * ln(b)
        )
        d0 = -(
            sum(d[i - 1] * p**-i for i in range(1, r)) + d[r - 1] * ln(p) + d[r] * ln(b)
        )
        return c, d, c0, d0
    # LMNS
    c = [(-1) ** i * math.comb(r, i) / (i * p**i) for i in range(1, r + 1)]
    d = [-1 / ((r + 1) * p**r)]
    c0 = 0 * one
    d0 = p / (r + 1)
    return c, d, c0, d0


def coefficients(
    params: VarianceParams, singular_tol: float = DEFAULT_SINGULAR_TOL
) -> CoefficientSet:
    """Closed-form c_i, d_i and boundary constants c0, d0 for ``params``.

    Raises ``SingularParametersError`` for LMS parameters inside the
    relative singularity band ``|p-b|/max(p,b) < singular_tol``.
    """
    c, d, c0, d0 = _coef_raw(params, singular_tol, 1.0, math.log)
    return CoefficientSet(tuple(map(float, c)), tuple(map(float, d)), float(c0), float(d0))


def _q_raw(params: VarianceParams, coef, n: int, ln):
    c, d, c0, d0 = coef
    r = params.r
    p = c0 * 0 + params.p  # adopt scalar type of the coefficients
    if params.family is ClassId.ABM:
        q = [d0 + r * ln(p) - n * c0]
        q += [-n * c[i - 1] for i in range(1, r - 1)]
        q += [d[r - 2] - n * c[r - 2]]
        q += [-r - n * c[r - 1]]
        return q
    if params.family is ClassId.LMS:
        b = c0 * 0 + params.b
        q = [d0 + ln(b * p**r) - n * c0]
        q += [d[i - 1] - n * c[i - 1] for i in range(1, r)]
        q += [d[r - 1] - r - n * c[r - 1]]
        q += [d[r] - 1 - n * c[r]]
        return q
    # LMNS
    q = [d0 - r * ln(p) - n * c0]
    q += [-n * c[i - 1] for i in range(1, r + 1)]
    q += [d[0]]
    q += [1 * r]
    return q


def q_vector(params: VarianceParams, n: int) -> QVector:
    """Basis coefficients of H_n for kernel index ``n`` (n >= 1)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    cs = coefficients(params)
    coef = (list(cs.c), list(cs.d), cs.c0, cs.d0)
    return QVector(n, tuple(float(v) for v in _q_raw(params, coef, n, math.log)))


def h_coefficient(params: VarianceParams, i: int, j: int) -> float:
    """Scaled j-th derivative at zero of the i-th basis function of H_n.

    Already divided by j!; closed form per family.
    """
    if j < 1:
        raise DomainError(f"j must be >= 1, got {j}")
    r, p = params.r, params.p
    size = params.basis_size
    if not 1 <= i <= size:
        raise DomainError(f"basis index i must be in 1..{size}, got {i}")
    if params.family is ClassId.ABM:
        if i <= r - 1:
            return (-1.0) ** j * math.comb(j + i - 1, j) * p ** (-i - j)
        return (-1.0) ** (j - 1) * p**-j / j  # i == r: log(m+p)
    if params.family is ClassId.LMS:
        if i <= r - 1:
            return (-1.0) ** j * math.comb(j + i - 1, j) * p ** (-i - j)
        if i == r:
            return (-1.0) ** (j - 1) * p**-j / j
        return (-1.0) ** (j - 1) * params.b**-j / j  # i == r+1: log(m+b)
    # LMNS
    if i <= r:
        return 1.0 if j == i else 0.0  # basis m**i
    if i == r + 1:
        if j > r + 1:
            return 0.0
        return (-1.0) ** j * math.comb(r + 1, j) * p ** (r + 1 - j)  # (p-m)**(r+1)
    return -(p**-j) / j  # i == r+2: log(p-m)


def _h_rows(params: VarianceParams, n: int, scale, q):
    """Scalar path: ``b_j * scale**j`` for j = 1..n-1 as a list.

    Generic over the scalar type of ``scale``/``q`` (float or mpmath mpf).
    Products are built incrementally so no intermediate binomial or power
    overflows on its own.  A log basis function log(m+a) contributes
    (-1)**(j-1) * (scale/a)**j / j, tracked through the running sign of
    ``s = (-scale/a)**j``.
    """
    r = params.r
    p = scale * 0 + params.p
    x = scale / p
    nj = n - 1
    out = [scale * 0 for _ in range(nj)]
    if params.family in (ClassId.ABM, ClassId.LMS):
        for i in range(1, r):  # power basis (m+p)**-i
            qi = q[i]
            if qi == 0:
                continue
            t = qi * p**-i
            for j in range(1, nj + 1):
                t = t * (-(j + i - 1) * x / j)
                out[j - 1] += t
        s = scale * 0 + 1  # log(m+p)
        for j in range(1, nj + 1):
            s = s * (-x)
            out[j - 1] += -q[r] * s / j
        if params.family is ClassId.LMS:
            xb = scale / (scale * 0 + params.b)  # log(m+b)
            s = scale * 0 + 1
            for j in range(1, nj + 1):
                s = s * (-xb)
                out[j - 1] += -q[r + 1] * s / j
    else:  # LMNS
        for i in range(1, min(r, nj) + 1):  # basis m**i hits only j == i
            out[i - 1] += q[i] * scale**i
        t = q[r + 1] * p ** (r + 1)  # basis (p-m)**(r+1)
        for j in range(1, min(r + 1, nj) + 1):
            t = t * (-(r + 2 - j) * x / j)
            out[j - 1] += t
        s = scale * 0 + 1  # basis log(p-m)
        for j in range(1, nj + 1):
            s = s * x
            out[j - 1] += -q[r + 2] * s / j
    return out


def _h_rows_np(params: VarianceParams, n: int, scale: float, q) -> np.ndarray:
    """Vectorized double-precision twin of ``_h_rows``."""
    r, p = params.r, params.p
    x = scale / p
    nj = n - 1
    js = np.arange(1.0, n)
    out = np.zeros(nj)
    if params.family in (ClassId.ABM, ClassId.LMS):
        for i in range(1, r):
            qi = q[i]
            if qi == 0:
                continue
            out += qi * p**-i * np.cumprod(-(js + i - 1) * x / js)
        out += -q[r] * np.cumprod(np.full(nj, -x)) / js
        if params.family is ClassId.LMS:
            xb = scale / params.b
            out += -q[r + 1] * np.cumprod(np.full(nj, -xb)) / js
    else:
        kmax = min(r, nj)
        ii = np.arange(1.0, kmax + 1)
        out[:kmax] += np.asarray(q[1 : kmax + 1]) * scale**ii
        jmax = min(r + 1, nj)
        out[:jmax] += q[r + 1] * p ** (r + 1) * np.cumprod(
            -(r + 2 - js[:jmax]) * x / js[:jmax]
        )
        out += -q[r + 2] * np.cumprod(np.full(nj, x)) / js
    return out


def h_deriv_scaled(params: VarianceParams, n: int) -> HDerivScaled:
    """All scaled derivatives of H_n at zero: sum_i q_i * h(i, j), j = 1..n-1."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    cs = coefficients(params)
    coef = (list(cs.c), list(cs.d), cs.c0, cs.d0)
    q = _q_raw(params, coef, n, math.log)
    return HDerivScaled(n, tuple(float(v) for v in _h_rows(params, n, 1.0, q)))


def h_zero_residual(params: VarianceParams, qv: QVector) -> tuple[float, float]:
    """Recombine H_n(0) from a q-vector; returns (residual, largest |term|).

    The residual is identically zero in exact arithmetic; the second value
    scales a relative tolerance.
    """
    r, p = params.r, params.p
    q = qv.q
    terms = [q[0]]
    if params.family in (ClassId.ABM, ClassId.LMS):
        terms += [q[i] * p**-i for i in range(1, r)]
        terms += [q[r] * math.log(p)]
        if params.family is ClassId.LMS:
            terms += [q[r + 1] * math.log(params.b)]
    else:
        terms += [q[r + 1] * p ** (r + 1), q[r + 2] * math.log(p)]
    return float(sum(terms)), float(max(abs(t) for t in terms))


# ---------------------------------------------------------------------------
# Kernel evaluation.  The production path derives the H_n derivative
# coefficients from the Taylor series of psi1'(m) rather than from the
# partial-fraction q/h closed forms: with u(m) = psi1'(m) (so u(0) = 1),
#
#   [m^j] psi1     = u_{j-1} / j
#   [m^j] log u    = standard series-log recurrence on u
#   [m^j] psi0     = u_j / j          (psi0' = (u - 1)/m)
#
# so b_j = H_n^(j)(0)/j! = u_{j-1}/j + (log u)_j - n * u_j/j is linear in
# n with n-independent precomputable vectors.  u's coefficients follow
# per-family one- or three-term recurrences with no (p - b) denominators,
# which keeps LMS evaluation stable arbitrarily close to the p = b ridge
# where the partial-fraction coefficients cancel catastrophically.  The
# two derivations are checked against each other in the test suite and
# via the partition-sum oracle.
# ---------------------------------------------------------------------------


def _checked_term(val: float, n: int, precision: str) -> float:
    if not math.isfinite(val):
        raise PrecisionError(f"kernel term mu_{n} is not finite (overflow)", n=n)
    if val <= 0:
        if precision == "double":
            raise PrecisionError(
                f"kernel term mu_{n} lost positivity under double precision; "
                "retry with precision='extended'",
                n=n,
            )
        raise PrecisionError(
            f"kernel term mu_{n} is nonpositive even at extended precision", n=n
        )
    return val


def _lms_band_check(params: VarianceParams, singular_tol: float) -> None:
    if params.family is ClassId.LMS:
        if abs(params.p - params.b) / max(params.p, params.b) < singular_tol:
            raise SingularParametersError(
                f"lms parameters p={params.p!r}, b={params.b!r} are within the "
                f"singularity band |p-b|/max(p,b) < {singular_tol:g}"
            )


class _DoubleStream:
    """Incremental producer of nu_n = mu_n * scale**n in double arithmetic."""

    def __init__(self, params: VarianceParams, scale: float):
        _lms_band_check(params, DEFAULT_SINGULAR_TOL)
        self.params = params
        self.scale = float(scale)
        self._x = self.scale / params.p
        cap = 64
        self.w = np.zeros(cap)  # w_j = u_j * scale**j
        self.w[0] = 1.0
        self.l = np.zeros(cap)  # series-log coefficients of u, scaled
        self.v1 = np.zeros(cap)  # n-free part of b_j
        self.v2 = np.zeros(cap)  # b_j = v1_j + n * v2_j
        self.jmax = 0
        if params.family is ClassId.LMS:
            p, b = params.p, params.b
            self._alpha = 1.0 / p + 1.0 / b
            self._beta = 1.0 / (p * b)
            self._gamma = params.r / p + 1.0 / b
            self._delta = (params.r + 1) * self._beta

    def _next_w(self, j: int) -> float:
        r = self.params.r
        fam = self.params.family
        if fam is ClassId.ABM:
            return self.w[j - 1] * (-self._x) * (r + j - 1) / j
        if fam is ClassId.LMNS:
            if j > r:
                return 0.0
            return self.w[j - 1] * (-self._x) * (r - j + 1) / j
        s = self.scale
        prev2 = self.w[j - 2] if j >= 2 else 0.0
        return (
            -(
                (self._alpha * (j - 1) + self._gamma) * s * self.w[j - 1]
                + (self._beta * (j - 2) + self._delta) * s * s * prev2
            )
            / j
        )

    def _extend(self, upto: int) -> None:
        if upto >= len(self.w):
            cap = max(2 * len(self.w), upto + 1)
            for name in ("w", "l", "v1", "v2"):
                arr = np.zeros(cap)
                arr[: self.jmax + 1] = getattr(self, name)[: self.jmax + 1]
                setattr(self, name, arr)
        while self.jmax < upto:
            j = self.jmax + 1
            wj = self._next_w(j)
            self.w[j] = wj
            if j == 1:
                lj = wj
            else:
                ks = np.arange(1.0, j)
                lj = wj - np.dot(ks * self.l[1:j], self.w[j - 1 : 0 : -1]) / j
            self.l[j] = lj
            self.v1[j] = self.w[j - 1] * self.scale / j + lj
            self.v2[j] = -wj / j
            self.jmax = j

    def term(self, n: int) -> float:
        """nu_n for n >= 2."""
        self._extend(n - 1)
        b = self.v1[1:n] + n * self.v2[1:n]
        jb = b * np.arange(1.0, n)
        a = np.empty(n)
        a[0] = 1.0
        for k in range(1, n):
            a[k] = np.dot(jb[:k], a[k - 1 :: -1]) / k
        return self.scale * a[n - 1] / n


class _ExtendedStream:
    """mpmath twin of ``_DoubleStream`` at EXTENDED_DPS digits."""

    def __init__(self, params: VarianceParams, scale):
        _lms_band_check(params, DEFAULT_SINGULAR_TOL)
        from mpmath import mp

        self.mp = mp
        self.params = params
        with mp.workdps(EXTENDED_DPS):
            self.scale = mp.mpf(scale)
            p = mp.mpf(params.p)
            self._x = self.scale / p
            if params.family is ClassId.LMS:
                b = mp.mpf(params.b)
                self._alpha = 1 / p + 1 / b
                self._beta = 1 / (p * b)
                self._gamma = params.r / p + 1 / b
                self._delta = (params.r + 1) * self._beta
            self.w = [mp.mpf(1)]
            self.l = [mp.mpf(0)]
            self.v1 = [mp.mpf(0)]
            self.v2 = [mp.mpf(0)]

    def _next_w(self, j: int):
        r = self.params.r
        fam = self.params.family
        if fam is ClassId.ABM:
            return self.w[j - 1] * (-self._x) * (r + j - 1) / j
        if fam is ClassId.LMNS:
            if j > r:
                return self.w[0] * 0
            return self.w[j - 1] * (-self._x) * (r - j + 1) / j
        s = self.scale
        prev2 = self.w[j - 2] if j >= 2 else self.w[0] * 0
        return (
            -(
                (self._alpha * (j - 1) + self._gamma) * s * self.w[j - 1]
                + (self._beta * (j - 2) + self._delta) * s * s * prev2
            )
            / j
        )

    def term(self, n: int) -> float:
        mp = self.mp
        with mp.workdps(EXTENDED_DPS):
            while len(self.w) - 1 < n - 1:
                j = len(self.w)
                wj = self._next_w(j)
                self.w.append(wj)
                if j == 1:
                    lj = wj
                else:
                    lj = wj - mp.fsum(
                        k * self.l[k] * self.w[j - k] for k in range(1, j)
                    ) / j
                self.l.append(lj)
                self.v1.append(self.w[j - 1] * self.scale / j + lj)
                self.v2.append(-wj / j)
            b = [self.v1[j] + n * self.v2[j] for j in range(1, n)]
            a = [mp.mpf(1)]
            for k in range(1, n):
                a.append(mp.fsum(j * b[j - 1] * a[k - j] for j in range(1, k + 1)) / k)
            val = self.scale * a[n - 1] / n
            if val <= 0:
                return float(val) if float(val) != 0 else -0.0
            return float(val)


def iter_scaled_kernel(params: VarianceParams, scale=1.0, precision: str = "double"):
    """Yield ``nu_n = mu_n * scale**n`` for n = 0, 1, 2, ... indefinitely.

    ``scale = exp(psi(m))`` turns the sequence into pmf values up to the
    common factor exp(-psi1(m)); the rescaling is folded into the Taylor
    recurrence itself so that neither mu_n nor scale**n is formed alone,
    which keeps deep tails inside double range.  Raises ``PrecisionError``
    on a non-finite or nonpositive term.
    """
    _check_precision(precision)
    if precision == "double":
        stream = _DoubleStream(params, float(scale))
    else:
        stream = _ExtendedStream(params, scale)
    yield 1.0
    yield float(scale)
    n = 2
    while True:
        yield _checked_term(float(stream.term(n)), n, precision)
        n += 1


def kernel_table(params: VarianceParams, N: int, precision: str = "double") -> KernelTable:
    """Kernel sequence mu_0..mu_N via the power-series recurrence."""
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    gen = iter_scaled_kernel(params, 1.0, precision)
    mu = np.fromiter((next(gen) for _ in range(N + 1)), dtype=float, count=N + 1)
    return KernelTable(params, mu)


def kernel_mu_oracle(
    params: VarianceParams,
    n: int,
    cap: int = ORACLE_DEFAULT_CAP,
    precision: str = "double",
) -> float:
    """Kernel term mu_n via the explicit integer-partition sum.

    Independent of the recurrence path; cost grows with the partition
    number of n - 1, so n is capped (default 20).
    """
    _check_precision(precision)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if n > cap:
        raise OracleCapError(
            f"partition-sum kernel evaluation capped at n <= {cap}, got n={n}"
        )
    if n <= 1:
        return 1.0

    def _sum(one, ln):
        coef = _coef_raw(params, DEFAULT_SINGULAR_TOL, one, ln)
        q = _q_raw(params, coef, n, ln)
        b = _h_rows(params, n, one, q)
        total = one * 0
        for kvec in enumerate_partitions(n - 1):
            prod = one * 1
            for j, kj in enumerate(kvec, start=1):
                for t in range(1, kj + 1):
                    prod = prod * b[j - 1] / t
            total = total + prod
        return total / n

    if precision == "double":
        return float(_sum(1.0, math.log))
    from mpmath import mp

    with mp.workdps(EXTENDED_DPS):
        return float(_sum(mp.mpf(1), mp.log))


# ---------------------------------------------------------------------------
# psi evaluation at a general mean value (used by the distributions layer).
# ---------------------------------------------------------------------------


def _psi_raw(params: VarianceParams, coef, m, ln):
    """(psi0(m), psi1(m)) from a coefficient tuple; psi(m) = psi0(m) + log m."""
    c, d, c0, d0 = coef
    r = params.r
    p = c0 * 0 + params.p
    if params.family is ClassId.ABM:
        mp_ = m + p
        psi0 = sum(c[i - 1] * mp_**-i for i in range(1, r)) + c[r - 1] * ln(mp_) + c0
        psi1 = d[r - 2] * mp_ ** (-(r - 1)) + d0
        return psi0, psi1
    if params.family is ClassId.LMS:
        b = c0 * 0 + params.b
        mp_ = m + p
        mb = m + b
        psi0 = (
            sum(c[i - 1] * mp_**-i for i in range(1, r))
            + c[r - 1] * ln(mp_)
            + c[r] * ln(mb)
            + c0
        )
        psi1 = (
            sum(d[i - 1] * mp_**-i for i in range(1, r))
            + d[r - 1] * ln(mp_)
            + d[r] * ln(mb)
            + d0
        )
        return psi0, psi1
    psi0 = sum(c[i - 1] * m**i for i in range(1, r + 1)) + c0
    psi1 = d[0] * (p - m) ** (r + 1) + d0
    return psi0, psi1
