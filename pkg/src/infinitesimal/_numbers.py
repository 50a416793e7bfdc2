"""Small exact-arithmetic helpers on top of :class:`fractions.Fraction`."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Optional, Union

Scalar = Union[Fraction, float]

#: Relative pruning threshold for approximate (float) coefficients.
APPROX_EPSILON = 1e-12


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {value!r}")


def iroot(n: int, k: int) -> Optional[int]:
    """Exact integer k-th root of ``n >= 0``, or None when n is not a perfect power."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        r = math.isqrt(n)
        return r if r * r == n else None
    # Newton iteration from an overestimate
    r = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    return r if r**k == n else None


def rational_power(base: Fraction, exponent: Fraction) -> Optional[Fraction]:
    """``base ** exponent`` for ``base > 0`` when the result is rational, else None."""
    base = as_fraction(base)
    exponent = as_fraction(exponent)
    if base <= 0:
        raise ValueError("rational_power needs a positive base")
    p, q = exponent.numerator, exponent.denominator
    num = iroot(base.numerator, q)
    den = iroot(base.denominator, q)
    if num is None or den is None:
        return None
    return Fraction(num, den) ** p


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_scalar(value: Scalar) -> str:
    """Exact rationals print as ``p/q``; floats print as their best rational
    approximation with denominator at most 10**6."""
    if isinstance(value, float):
        if not math.isfinite(value):
            return repr(value)
        return format_rational(Fraction(value).limit_denominator(10**6))
    return format_rational(value)


def sign(value) -> int:
    return (value > 0) - (value < 0)
