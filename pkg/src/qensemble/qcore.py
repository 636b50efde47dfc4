"""Exact rational arithmetic and q-calculus primitives.

All operations work in two modes with identical signatures:

* exact mode -- arguments are :class:`fractions.Fraction` (or int) and every
  result is an exact rational;
* float mode -- arguments are floats and results are double precision.

Exact mode is the oracle for float mode throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

#: The universal exact value type.  ``Fraction`` already guarantees the
#: invariants we need: lowest terms, positive denominator, exact arithmetic.
ExactScalar = Fraction

Scalar = Union[Fraction, int, float]


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


class TruncationError(ArithmeticError):
    """Raised when a truncated series/lattice sum cannot reach the tolerance."""


def _validate_q(q: Scalar) -> None:
    if not 0 < q < 1:
        raise DomainError(f"q must lie in (0,1), got {q}")


@dataclass(frozen=True)
class QParams:
    """Parameter bundle (q, a) with 0 < q < 1 and a < 0."""

    q: Scalar
    a: Scalar

    def __post_init__(self) -> None:
        _validate_q(self.q)
        if not self.a < 0:
            raise DomainError(f"a must be negative, got {self.a}")

    @property
    def is_exact(self) -> bool:
        return not (isinstance(self.q, float) or isinstance(self.a, float))

    def as_float(self) -> "QParams":
        return QParams(float(self.q), float(self.a))


def q_int(n: int, q: Scalar) -> Scalar:
    """q-deformed integer [n]_q = 1 + q + ... + q^(n-1) = (1-q^n)/(1-q).

    Accepts q = 1 (returns n) so classical limits can be checked.
    """
    if n < 0:
        raise DomainError(f"q_int requires n >= 0, got {n}")
    if q == 1:
        return n if isinstance(q, int) else type(q)(n)
    return (1 - q**n) / (1 - q)


def q_factorial(n: int, q: Scalar) -> Scalar:
    """[n]_q! = [1]_q [2]_q ... [n]_q, with [0]_q! = 1."""
    if n < 0:
        raise DomainError(f"q_factorial requires n >= 0, got {n}")
    result = _one_like(q)
    for m in range(2, n + 1):
        result = result * q_int(m, q)
    return result


def q_double_factorial(n: int, q: Scalar) -> Scalar:
    """[n]_q!! = [n]_q [n-2]_q ... down to [1]_q or [2]_q.

    Convention: [0]_q!! = [-1]_q!! = 1.  (The value at n = -1 is needed so
    that the boundary cases of the matching-sum closed form are consistent.)
    """
    if n < -1:
        raise DomainError(f"q_double_factorial requires n >= -1, got {n}")
    result = _one_like(q)
    m = n
    while m >= 2:
        result = result * q_int(m, q)
        m -= 2
    return result


def q_binomial(n: int, k: int, q: Scalar) -> Scalar:
    """Gaussian binomial coefficient [n]_q! / ([k]_q! [n-k]_q!)."""
    if k < 0 or k > n:
        raise DomainError(f"q_binomial requires 0 <= k <= n, got n={n}, k={k}")
    if isinstance(q, int):
        q = Fraction(q)  # keep the division exact
    return q_factorial(n, q) / (q_factorial(k, q) * q_factorial(n - k, q))


def q_pochhammer_finite(z: Scalar, q: Scalar, n: int) -> Scalar:
    """Finite product (z; q)_n = (1-z)(1-zq)...(1-zq^(n-1)); empty for n = 0."""
    if n < 0:
        raise DomainError(f"q_pochhammer_finite requires n >= 0, got {n}")
    result = _one_like(q)
    zq = z
    for _ in range(n):
        result = result * (1 - zq)
        zq = zq * q
    return result


def q_pochhammer_infinite(z: float, q: float, tol: float = 1e-14) -> float:
    """Infinite product (z; q)_inf = prod_{l>=0} (1 - z q^l), float mode.

    The product is truncated once the log-tail bound
    sum_{l>L} |z| q^l / (1 - |z| q^l) drops below ``tol``, so the relative
    error is of order tol.  A vanishing factor (z q^l = 1) yields an exact 0.
    """
    z = float(z)
    q = float(q)
    if not abs(q) < 1:
        raise DomainError(f"q_pochhammer_infinite requires |q| < 1, got q={q}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    if z == 0.0:
        return 1.0
    result = 1.0
    zq = z
    absq = abs(q)
    for l in range(100000):
        result *= 1.0 - zq
        if result == 0.0:
            return 0.0
        zq *= q
        t = abs(zq)
        if t < 0.5:
            # tail bound: sum_{m>l} |z q^m| / (1-|z q^m|) <= t/((1-q)(1-t))
            if t / ((1.0 - absq) * (1.0 - t)) < tol:
                return result
    raise TruncationError("q_pochhammer_infinite did not converge")


def jackson_integral(
    f: Callable[[float], float],
    a: float,
    q: float,
    trunc_tol: float = 1e-12,
) -> float:
    """Jackson q-integral of f over [a, 1] with a < 0.

    Evaluates (1-q) sum_k [ q^k f(q^k) - a q^k f(a q^k) ] over the bilateral
    geometric lattice {q^k} union {a q^k}.  Truncation: after each decade of
    lattice points the geometric tail is bounded by 10 x the largest |f| seen
    in that decade (safety factor 10); summation stops once the bound is
    below ``trunc_tol``.
    """
    a = float(a)
    q = float(q)
    if not a < 0:
        raise DomainError(f"jackson_integral requires a < 0, got {a}")
    _validate_q(q)
    if trunc_tol <= 0:
        raise DomainError("trunc_tol must be positive")
    # number of lattice points per decade in x
    chunk = max(1, math.ceil(math.log(0.1) / math.log(q)))
    total = 0.0
    qk = 1.0
    k = 0
    while True:
        fmax = 0.0
        for _ in range(chunk):
            xp = qk
            xm = a * qk
            fp = f(xp)
            fm = f(xm)
            if not (math.isfinite(fp) and math.isfinite(fm)):
                bad = xp if not math.isfinite(fp) else xm
                raise TruncationError(
                    f"non-finite integrand value at lattice point x={bad!r}"
                )
            total += qk * (fp - a * fm)
            fmax = max(fmax, abs(fp), abs(fm))
            qk *= q
            k += 1
        # tail of the final integral: (1-q) * sum_{m>k} q^m (|f| + |a f|)
        # <= fmax*(1+|a|)*q^(k+1), padded by safety factor 10 (f decays
        # toward 0 for the integrands we use, so fmax over the last decade
        # bounds the tail values)
        tail = 10.0 * fmax * (1.0 + abs(a)) * qk
        if tail < trunc_tol:
            break
        if k > 10_000_000:
            raise TruncationError("jackson_integral truncation did not converge")
    return (1.0 - q) * total


def _one_like(q: Scalar) -> Scalar:
    """Multiplicative unit in the arithmetic mode of q."""
    if isinstance(q, float):
        return 1.0
    if isinstance(q, Fraction):
        return Fraction(1)
    return 1
