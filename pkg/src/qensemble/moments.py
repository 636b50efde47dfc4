"""Closed-form spectral moments of the ensemble and reference values.

The central object is the exact triple sum ``moment_closed`` over
(j, k, l); its per-j summand ``moment_component`` must agree exactly with
the two combinatorial routes in :mod:`qensemble.combinat`, which is the
package's main correctness gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from .combinat import h_sum
from .qcore import (
    DomainError,
    QParams,
    Scalar,
    q_double_factorial,
    q_factorial,
    q_binomial,
)


@dataclass(frozen=True)
class EnsembleParams:
    """Validated (a, q, N) bundle: a < 0, q in (0,1), N a positive integer."""

    a: Scalar
    q: Scalar
    N: int

    def __post_init__(self) -> None:
        if not self.a < 0:
            raise DomainError(f"a must be negative, got {self.a}")
        if not 0 < self.q < 1:
            raise DomainError(f"q must lie in (0,1), got {self.q}")
        if not (isinstance(self.N, int) and self.N >= 1):
            raise DomainError(f"N must be a positive integer, got {self.N}")

    @property
    def qparams(self) -> QParams:
        return QParams(q=self.q, a=self.a)

    @property
    def is_exact(self) -> bool:
        return not (isinstance(self.q, float) or isinstance(self.a, float))

    def as_float(self) -> "EnsembleParams":
        return EnsembleParams(a=float(self.a), q=float(self.q), N=self.N)


def moment_component(p: int, j: int, params: QParams) -> Scalar:
    """Closed-form (k, l) double sum for the j-th moment component.

    Sums (a+1)^(p-2k) (-a)^k (1-q)^k q^(-l(p-l)+l(l-1)/2)
    [p]_q!/([p-2l]_q!! [l]_q!) h_sum(k-l, p-2k) q^(j(p-l)) qbinom(j, l)
    over 0 <= l <= k <= p//2.  Summing over j < N gives the full moment.
    """
    if p < 0 or j < 0:
        raise DomainError("p and j must be nonnegative")
    q, a = params.q, params.a
    pfact = q_factorial(p, q)
    total: Scalar = 0
    for k in range(p // 2 + 1):
        prefactor = (a + 1) ** (p - 2 * k) * (-a) ** k * (1 - q) ** k
        inner: Scalar = 0
        for l in range(min(k, j) + 1):
            expo = -l * (p - l) + l * (l - 1) // 2
            inner = inner + (
                q**expo
                * pfact
                / (q_double_factorial(p - 2 * l, q) * q_factorial(l, q))
                * h_sum(k - l, p - 2 * k, q)
                * q ** (j * (p - l))
                * q_binomial(j, l, q)
            )
        total = total + prefactor * inner
    return total


def moment_closed(params: EnsembleParams, p: int) -> Scalar:
    """Spectral moment m_{N,p}: expected power sum E[sum_i x_i^p].

    Exact rational for exact params; the j-sum is evaluated term by term.
    """
    qp = params.qparams
    total: Scalar = 0
    for j in range(params.N):
        total = total + moment_component(p, j, qp)
    return total


def symmetry_pair(params: EnsembleParams, p: int) -> tuple[Scalar, Scalar]:
    """Return (m_{N,p} at parameter 1/a, a^(-p) m_{N,p} at parameter a).

    The two entries are equal; callers assert the equality.
    """
    if p < 0:
        raise DomainError("p must be nonnegative")
    a = Fraction(params.a) if isinstance(params.a, int) else params.a
    inv = Fraction(1, 1) / a if isinstance(a, Fraction) else 1.0 / a
    reflected = EnsembleParams(a=inv, q=params.q, N=params.N)
    return (moment_closed(reflected, p), a ** (-p) * moment_closed(params, p))


def qgue_moment(params: EnsembleParams, p: int) -> Scalar:
    """Spectral moment in the a = -1 case, via the reduced double sum.

    Only k = p/2 survives for even p; odd moments vanish by symmetry.
    """
    if params.a != -1:
        raise DomainError("qgue_moment requires a = -1")
    if p < 0:
        raise DomainError("p must be nonnegative")
    if p % 2 == 1:
        return 0 if params.is_exact else 0.0
    q = params.q
    pfact = q_factorial(p, q)
    total: Scalar = 0
    for j in range(params.N):
        for l in range(min(p // 2, j) + 1):
            expo = -l * (p - l) + l * (l - 1) // 2
            total = total + (
                q**expo
                * pfact
                / (q_double_factorial(p - 2 * l, q) * q_factorial(l, q))
                * q ** (j * (p - l))
                * q_binomial(j, l, q)
            )
    return (1 - q) ** (p // 2) * total


def qgauss_integral(p: int, q: Scalar) -> Scalar:
    """q-deformed Gaussian integral: int x^(2p) w(x) dqx at a = -1 equals
    (1-q)^(p+1) [2p-1]_q!!."""
    if p < 0:
        raise DomainError("p must be nonnegative")
    return (1 - q) ** (p + 1) * q_double_factorial(2 * p - 1, q)


def gue_moment(N: int, p: int) -> int:
    """Classical GUE reference moment E[Tr H^p] for even p:
    (p-1)!! sum_l C(N, l+1) C(p/2, l) 2^l."""
    if p % 2 != 0 or p < 0:
        raise DomainError("gue_moment requires even p >= 0")
    if N < 1:
        raise DomainError("N must be positive")
    half = p // 2
    dfact = math.prod(range(p - 1, 0, -2))
    return dfact * sum(
        math.comb(N, l + 1) * math.comb(half, l) * 2**l for l in range(half + 1)
    )
