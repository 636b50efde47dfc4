"""Large-N expansion coefficients of the scaled spectral moments.

Under the scaling q = exp(-lambda/N) the moments expand as
q^(p/2) m_{N,p} = M_p0 * N + M_p1 / N + O(N^-3); this module provides the
two coefficients, the special functions they are built from, and the
continuum (lambda -> 0) reference values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .moments import EnsembleParams, moment_closed
from .qcore import DomainError


@dataclass(frozen=True)
class ScalingParams:
    """Double-scaling parameters: fixed a < 0 and lambda > 0, q = e^(-lambda/N)."""

    a: float
    lam: float

    def __post_init__(self) -> None:
        if not self.a < 0:
            raise DomainError(f"a must be negative, got {self.a}")
        if not self.lam > 0:
            raise DomainError(f"lambda must be positive, got {self.lam}")

    @property
    def s(self) -> float:
        """Cached e^(-lambda), always in (0, 1)."""
        return math.exp(-self.lam)


@lru_cache(maxsize=None)
def stirling_first(n: int, k: int) -> int:
    """Signed Stirling number of the first kind s(n, k).

    Defined by the recurrence s(n, k) = s(n-1, k-1) - (n-1) s(n-1, k);
    equals (-1)^(n-k) times the number of permutations of n elements with
    k cycles.  Returns 0 for k > n or k < 0 (not an error).
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if k > n or k < 0:
        return 0
    if n == 0:
        return 1 if k == 0 else 0
    return stirling_first(n - 1, k - 1) - (n - 1) * stirling_first(n - 1, k)


def _beta_contfrac(x: float, a: float, b: float) -> float:
    """Modified-Lentz evaluation of the continued fraction for I_x(a, b)."""
    eps = 1e-16
    fpmin = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, 500):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def inc_beta_reg(x: float, alpha: float, beta: float) -> float:
    """Regularised incomplete beta function I_x(alpha, beta).

    Continued fraction with the standard switch at x = (alpha+1)/(alpha+beta+2),
    using the symmetry I_x(a, b) = 1 - I_{1-x}(b, a); relative accuracy is
    near machine precision.
    """
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if alpha <= 0 or beta <= 0:
        raise DomainError("alpha and beta must be positive")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    lbeta = (
        math.lgamma(alpha + beta)
        - math.lgamma(alpha)
        - math.lgamma(beta)
        + alpha * math.log(x)
        + beta * math.log1p(-x)
    )
    if x < (alpha + 1.0) / (alpha + beta + 2.0):
        return math.exp(lbeta) * _beta_contfrac(x, alpha, beta) / alpha
    return 1.0 - math.exp(lbeta) * _beta_contfrac(1.0 - x, beta, alpha) / beta


def m_p0(p: int, sp: ScalingParams) -> float:
    """Leading expansion coefficient, an incomplete-beta sum over l <= p/2."""
    if p < 0:
        raise DomainError("p must be nonnegative")
    if p == 0:
        return 1.0  # m_{N,0} = N exactly
    a, lam, s = sp.a, sp.lam, sp.s
    total = 0.0
    for l in range(p // 2 + 1):
        total += (
            (a + 1.0) ** (p - 2 * l)
            * (-a) ** l
            * math.factorial(p - l - 1)
            / (math.factorial(l) * math.factorial(p - 2 * l))
            * inc_beta_reg(1.0 - s, l + 1, p - l)
        )
    return total / lam


def m_p0_alt(p: int, sp: ScalingParams) -> float:
    """Same coefficient with the inner beta replaced by its finite binomial
    sum sum_{j=l+1}^p C(p, j) (1-s)^j s^(p-j)."""
    if p < 0:
        raise DomainError("p must be nonnegative")
    if p == 0:
        return 1.0
    a, lam, s = sp.a, sp.lam, sp.s
    total = 0.0
    for l in range(p // 2 + 1):
        binsum = sum(
            math.comb(p, j) * (1.0 - s) ** j * s ** (p - j)
            for j in range(l + 1, p + 1)
        )
        total += (
            (a + 1.0) ** (p - 2 * l)
            * (-a) ** l
            * math.factorial(p - l - 1)
            / (math.factorial(l) * math.factorial(p - 2 * l))
            * binsum
        )
    return total / lam


def m_p1(p: int, sp: ScalingParams) -> float:
    """Subleading (1/N) expansion coefficient.

    The l = 0 term of the second piece carries 1/(l-1)! and is zero by the
    reciprocal-Gamma convention.
    """
    if p < 0:
        raise DomainError("p must be nonnegative")
    if p == 0:
        return 0.0  # m_{N,0} = N has no 1/N correction
    a, lam, s = sp.a, sp.lam, sp.s
    total = 0.0
    for l in range(p // 2 + 1):
        piece = 0.5 * p * math.factorial(p - l - 1) * inc_beta_reg(
            1.0 - s, l + 1, p - l
        )
        if l >= 1:
            piece += (
                math.factorial(p - 1)
                / math.factorial(l - 1)
                * s ** (p - l)
                * (1.0 - s) ** (l - 1)
                * (p - l + 2 - (p + 1) * s)
            )
        total += (
            (a + 1.0) ** (p - 2 * l)
            * (-a) ** l
            / (math.factorial(p - 2 * l) * math.factorial(l))
            * piece
        )
    return -lam * p / 12.0 * total


def expansion_residual(p: int, sp: ScalingParams, N: int) -> float:
    """q^(p/2) m_{N,p} - M_p0 N - M_p1 / N at q = e^(-lambda/N).

    Decays like 1/N^3; used to confirm the expansion order empirically.
    """
    if N < 1:
        raise DomainError("N must be positive")
    q = math.exp(-sp.lam / N)
    m = moment_closed(EnsembleParams(a=float(sp.a), q=q, N=N), p)
    value = q ** (p / 2.0) * m - m_p0(p, sp) * N - m_p1(p, sp) / N
    if not math.isfinite(value):
        raise ArithmeticError(f"moment evaluation overflowed at p={p}, N={N}")
    return value


def shifted_semicircle_moment(p: int, r: float) -> float:
    """p-th moment of the unit semicircle density shifted by r:
    sum_l C(p, 2l) r^(p-2l) Catalan(l)."""
    if p < 0:
        raise DomainError("p must be nonnegative")
    total = 0.0
    for l in range(p // 2 + 1):
        catalan = math.comb(2 * l, l) // (l + 1)
        total += math.comb(p, 2 * l) * float(r) ** (p - 2 * l) * catalan
    return total


def continuum_moment_limit(p: int, r: float, lam: float) -> float:
    """lambda^(-p/2) M_p0 evaluated at a = -1 + r sqrt(lambda).

    As lambda -> 0 this converges to the shifted-semicircle moment.
    """
    if lam <= 0:
        raise DomainError("lambda must be positive")
    a = -1.0 + r * math.sqrt(lam)
    if not a < 0:
        raise DomainError("r sqrt(lambda) must stay below 1")
    sp = ScalingParams(a=a, lam=lam)
    return lam ** (-p / 2.0) * m_p0(p, sp)
