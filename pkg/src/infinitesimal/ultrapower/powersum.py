"""Sequences ``c + sum alpha * (n+1)**(-q)`` with rational data.

These power sums are closed under ring operations, converge to ``c`` and, when
not identically zero, have an eventually constant sign.  Signs at the finitely
many early indices are decided exactly: with ``N = n+1`` and ``L`` the common
denominator of the exponents the value is a polynomial in ``z = N**(1/L)``, a
rational number when ``N`` is a perfect ``L``-th power and otherwise tested for
vanishing through a polynomial gcd with ``z**L - N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import mpmath

from .._numbers import as_fraction, format_rational, iroot, rational_power
from ..errors import PreconditionError
from .epset import EpSet

# Sign runs are resolved below this index; beyond it the sign must already be certified.
MAX_SCAN = 10**7


class PTerm(NamedTuple):
    coef: Fraction
    exponent: Fraction  # > 0


@dataclass(frozen=True, init=False)
class PowerSum:
    const: Fraction
    terms: tuple  # PTerms with strictly increasing exponents, nonzero coefficients

    def __init__(self, const=0, terms=()):
        acc: dict = {}
        for coef, q in terms:
            q = as_fraction(q)
            if q <= 0:
                if q == 0:
                    const = as_fraction(const) + as_fraction(coef)
                    continue
                raise ValueError("power sum exponents must be positive")
            acc[q] = acc.get(q, Fraction(0)) + as_fraction(coef)
        object.__setattr__(self, "const", as_fraction(const))
        object.__setattr__(
            self, "terms", tuple(PTerm(c, q) for q, c in sorted(acc.items()) if c != 0)
        )

    @classmethod
    def power(cls, q, coef=1) -> "PowerSum":
        """``coef * (n+1)**(-q)``."""
        return cls(0, [(coef, q)])

    # -- arithmetic ----------------------------------------------------------------

    def _coerce(self, other) -> "PowerSum":
        return other if isinstance(other, PowerSum) else PowerSum(as_fraction(other))

    def __add__(self, other):
        other = self._coerce(other)
        return PowerSum(self.const + other.const, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return PowerSum(-self.const, [(-c, q) for c, q in self.terms])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        a = [(self.const, Fraction(0))] + list(self.terms)
        b = [(other.const, Fraction(0))] + list(other.terms)
        return PowerSum(0, [(c * d, p + q) for c, p in a for d, q in b])

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = PowerSum(1)
        for _ in range(k):
            out = out * self
        return out

    # -- structure -----------------------------------------------------------------

    def all_terms(self) -> list[tuple]:
        """``(coef, exponent)`` pairs including the constant as exponent 0."""
        head = [(self.const, Fraction(0))] if self.const else []
        return head + [(c, q) for c, q in self.terms]

    def is_zero(self) -> bool:
        return self.const == 0 and not self.terms

    def leading(self) -> Optional[tuple]:
        """The dominant ``(coef, exponent)`` as ``n`` grows, or None for the zero sequence."""
        ts = self.all_terms()
        return ts[0] if ts else None

    def eventual_sign(self) -> int:
        lead = self.leading()
        return 0 if lead is None else (1 if lead[0] > 0 else -1)

    @property
    def limit(self) -> Fraction:
        return self.const

    # -- values --------------------------------------------------------------------

    def exact_value(self, n: int) -> Optional[Fraction]:
        """The value at index ``n`` when it is rational (always the case for suitable ``n``)."""
        s = Fraction(1, n + 1)
        total = self.const
        for c, q in self.terms:
            v = rational_power(s, q)
            if v is None:
                return None
            total += c * v
        return total

    def value(self, n: int, dps: int = 30):
        """The value at index ``n`` as an mpmath number."""
        with mpmath.workdps(dps):
            big = mpmath.mpf(n + 1)
            total = mpmath.mpf(self.const.numerator) / self.const.denominator
            for c, q in self.terms:
                total += (mpmath.mpf(c.numerator) / c.denominator) * big ** (-mpmath.mpf(q.numerator) / q.denominator)
            return +total

    def float_value(self, n: int) -> float:
        return float(self.const) + sum(float(c) * (n + 1) ** (-float(q)) for c, q in self.terms)

    def sign_at(self, n: int) -> int:
        """Exact sign of the value at index ``n``."""
        ts = self.all_terms()
        if not ts:
            return 0
        # fast path: floating point with a generous relative error budget
        vals = [float(c) * (n + 1) ** (-float(q)) for c, q in ts]
        v, scale = sum(vals), sum(abs(x) for x in vals)
        if abs(v) > 1e-9 * scale:
            return 1 if v > 0 else -1
        return _exact_sign(ts, n + 1)

    def certified_index(self) -> int:
        """An index from which on the sign equals :meth:`eventual_sign`.

        Only terms whose sign opposes the leading term can flip the sign, and
        ``|a0| > sum |a_i| * N**(e0 - e_i)`` over those terms is monotone in ``N``;
        the least such ``N`` is found by doubling and bisection.
        """
        ts = self.all_terms()
        if not ts:
            return 0
        a0, e0 = ts[0]
        against = [(abs(c), q - e0) for c, q in ts[1:] if (c > 0) != (a0 > 0)]
        if not against:
            return 0
        lead = abs(float(a0)) * (1 - 1e-9)

        def ok(big: int) -> bool:
            return lead > sum(float(c) * big ** -float(d) for c, d in against)

        hi = 1
        while not ok(hi):
            hi *= 2
            if hi > 2 * MAX_SCAN:
                raise PreconditionError(
                    f"sign of {self} is not certified before index {MAX_SCAN}"
                )
        lo = hi // 2
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if ok(mid):
                hi = mid
            else:
                lo = mid
        return hi - 1

    def _interval_sign(self, lo: int, hi: int) -> int:
        """The common sign on indices ``lo..hi-1`` if interval bounds certify one, else 0."""
        low = high = 0.0
        scale = 0.0
        for c, q in self.all_terms():
            c, q = float(c), float(q)
            a, b = c * (lo + 1) ** -q, c * hi**-q
            low += min(a, b)
            high += max(a, b)
            scale += abs(a)
        slack = 1e-9 * scale
        if low > slack:
            return 1
        if high < -slack:
            return -1
        return 0

    def sign_runs(self, stop: int) -> list[tuple]:
        """``(start, end, sign)`` runs covering the indices below ``stop``."""
        runs: list = []
        stack = [(0, stop)] if stop > 0 else []
        while stack:
            lo, hi = stack.pop()
            sgn = self.sign_at(lo) if hi - lo == 1 else self._interval_sign(lo, hi)
            if sgn or hi - lo == 1:
                if runs and runs[-1][1] == lo and runs[-1][2] == sgn:
                    runs[-1] = (runs[-1][0], hi, sgn)
                else:
                    runs.append((lo, hi, sgn))
                continue
            mid = (lo + hi) // 2
            stack.append((mid, hi))
            stack.append((lo, mid))
        return runs

    def sign_sets(self) -> tuple[EpSet, EpSet, EpSet]:
        """``({n : u_n < 0}, {n : u_n = 0}, {n : u_n > 0})``."""
        tail = self.eventual_sign()
        start = self.certified_index()
        runs = self.sign_runs(start)
        return tuple(
            EpSet.from_runs([(a, b) for a, b, g in runs if g == s], start, tail == s)
            for s in (-1, 0, 1)
        )

    # -- text ----------------------------------------------------------------------

    def __str__(self):
        return format_powersum(self)

    def __repr__(self):
        return f"PowerSum({str(self)!r})"


def format_powersum(u: PowerSum, var: str = "h") -> str:
    """Text with ``h`` standing for ``1/(n+1)``: ``2 + 3*h - 1/2*h^3/2``."""
    parts = []
    for c, q in u.all_terms():
        if q == 0:
            body = format_rational(abs(c))
        else:
            power = var if q == 1 else f"{var}^{format_rational(q)}" if q.denominator == 1 else f"{var}^({format_rational(q)})"
            body = power if abs(c) == 1 else f"{format_rational(abs(c))}*{power}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


# -- exact sign at an irrational point ------------------------------------------------


def _exact_sign(ts: list, big: int) -> int:
    lcm = 1
    for _, q in ts:
        lcm = math.lcm(lcm, q.denominator)
    root = iroot(big, lcm)
    if root is not None:
        total = sum(c * Fraction(1, root) ** int(q * lcm) for c, q in ts)
        return (total > 0) - (total < 0)
    # P(z) = sum c * z**(top - q*L) has the sign of the value at z = big**(1/L) > 0
    top = max(int(q * lcm) for _, q in ts)
    poly = [Fraction(0)] * (top + 1)
    for c, q in ts:
        poly[top - int(q * lcm)] += c
    g = _poly_gcd(_trim(poly), [Fraction(-big)] + [Fraction(0)] * (lcm - 1) + [Fraction(1)])
    if len(g) > 1:
        # the only positive root g can have is big**(1/L), which lies in (k, k+1)
        k = _int_root_floor(big, lcm)
        if _poly_eval(g, Fraction(k)) * _poly_eval(g, Fraction(k + 1)) < 0:
            return 0
    dps = 40
    while True:
        with mpmath.workdps(dps):
            z = mpmath.root(mpmath.mpf(big), lcm)
            terms = [(mpmath.mpf(c.numerator) / c.denominator) * z ** (top - int(q * lcm)) for c, q in ts]
            v, scale = mpmath.fsum(terms), mpmath.fsum(abs(t) for t in terms)
            if abs(v) > scale * mpmath.mpf(10) ** (10 - dps):
                return 1 if v > 0 else -1
        dps *= 2


def _int_root_floor(n: int, k: int) -> int:
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def _trim(p: list) -> list:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_eval(p: list, x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(p):
        out = out * x + c
    return out


def _poly_rem(a: list, b: list) -> list:
    a = list(a)
    while len(a) >= len(b) and any(a):
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a = _trim(a[:-1]) if a[-1] == 0 else _trim(a)
        if len(a) < len(b):
            break
    return _trim(a)


def _poly_gcd(a: list, b: list) -> list:
    a, b = _trim(a), _trim(b)
    while any(b):
        a, b = b, _poly_rem(a, b)
    return a
