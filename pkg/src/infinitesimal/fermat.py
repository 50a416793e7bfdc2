"""The ring of Fermat reals.

A Fermat real is stored in its unique decomposition

    x = st(x) + sum_i  c_i * dt_{w_i}        w_1 > w_2 > ... >= 1,  c_i != 0

where ``dt_a`` is the class of the sequence ``(1/(n+1)) ** (1/a)``.  Orders are
rationals, coefficients are either all exact (:class:`fractions.Fraction`) or
all approximate (``float``); the two modes never mix inside one value.

The product rule ``dt_a * dt_b = dt_{ab/(a+b)}`` together with ``dt_a = 0`` for
``a < 1`` makes every infinitesimal nilpotent, so all algorithms here are
finite.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

import mpmath

from ._numbers import (
    APPROX_EPSILON,
    Scalar,
    as_fraction,
    format_rational,
    format_scalar,
    rational_power,
    sign,
)
from .errors import DomainError, ModeError, NotInvertible, PartialityError, PreconditionError

__all__ = [
    "FermatReal",
    "Term",
    "dt",
    "term_pow",
    "pow_int",
    "st",
    "std_parts",
    "orders",
    "order",
    "n_terms",
    "is_infinitesimal",
    "is_real",
    "is_invertible",
    "in_ideal",
    "nilpotent_power_is_zero",
    "power_product_order",
    "compare",
    "invert",
    "pseudo_distance",
    "representative_sample",
    "exact_sample_index",
    "sign_crossover_index",
    "graph_points",
    "separation_delta",
]


class Term(NamedTuple):
    """One summand ``coef * dt_order`` of a decomposition."""

    coef: Scalar
    order: Fraction


def _lift(value, exact: bool) -> Scalar:
    if exact:
        if isinstance(value, float):
            raise ModeError("cannot combine an approximate scalar with an exact Fermat real")
        return as_fraction(value)
    return float(value)


def _product_order(a: Fraction, b: Fraction) -> Fraction:
    return a * b / (a + b)


class FermatReal:
    """An element of the ring of Fermat reals in canonical (decomposed) form.

    ``FermatReal(std, [(coef, order), ...])`` accepts an arbitrary list of terms
    and normalizes it: equal orders are merged, zero coefficients and orders
    below 1 are dropped, and the result is sorted by decreasing order.
    """

    __slots__ = ("_std", "_terms")

    def __init__(self, std=0, terms: Iterable = (), *, exact: Optional[bool] = None, _scale=None):
        terms = list(terms)
        if exact is None:
            exact = not isinstance(std, float) and not any(isinstance(c, float) for c, _ in terms)
        std = _lift(std, exact)
        merged: dict[Fraction, Scalar] = {}
        magnitude = abs(std)
        for coef, w in terms:
            w = as_fraction(w)
            coef = _lift(coef, exact)
            magnitude = max(magnitude, abs(coef))
            if w < 1:
                continue
            merged[w] = merged.get(w, 0) + coef
        if exact:
            kept = [Term(c, w) for w, c in merged.items() if c != 0]
        else:
            scale = 1.0 + float(magnitude if _scale is None else _scale)
            tol = APPROX_EPSILON * scale
            kept = [Term(float(c), w) for w, c in merged.items() if abs(c) > tol]
            if abs(std) <= tol:
                std = 0.0
        kept.sort(key=lambda t: t.order, reverse=True)
        self._std = std
        self._terms = tuple(kept)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_parts(cls, std_parts: Sequence, orders: Sequence) -> "FermatReal":
        """Build from the Matlab-style vectors ``[st, c_1, ..., c_N]`` and ``[w_1, ..., w_N]``."""
        if len(std_parts) != len(orders) + 1:
            raise DomainError("need one more standard part than orders")
        return cls(std_parts[0], zip(std_parts[1:], orders))

    @classmethod
    def _raw(cls, std: Scalar, terms: tuple) -> "FermatReal":
        obj = object.__new__(cls)
        obj._std = std
        obj._terms = terms
        return obj

    # -- accessors ---------------------------------------------------------------

    @property
    def std(self) -> Scalar:
        return self._std

    @property
    def terms(self) -> tuple:
        return self._terms

    @property
    def exact(self) -> bool:
        return not isinstance(self._std, float)

    def to_approx(self) -> "FermatReal":
        if not self.exact:
            return self
        return FermatReal._raw(float(self._std), tuple(Term(float(c), w) for c, w in self._terms))

    def _magnitude(self) -> Scalar:
        return max([abs(self._std)] + [abs(c) for c, _ in self._terms])

    def _coerce(self, other) -> "FermatReal":
        if isinstance(other, FermatReal):
            if other.exact != self.exact:
                raise ModeError("cannot mix exact and approximate Fermat reals")
            return other
        if isinstance(other, (int, Rational, float)):
            return FermatReal(_lift(other, self.exact), (), exact=self.exact)
        return NotImplemented

    # -- ring operations -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FermatReal(
            self._std + other._std,
            self._terms + other._terms,
            exact=self.exact,
            _scale=None if self.exact else max(self._magnitude(), other._magnitude()),
        )

    __radd__ = __add__

    def __neg__(self):
        return FermatReal._raw(-self._std, tuple(Term(-c, w) for c, w in self._terms))

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = [Term(self._std * c, w) for c, w in other._terms]
        terms += [Term(other._std * c, w) for c, w in self._terms]
        for c1, w1 in self._terms:
            for c2, w2 in other._terms:
                w = _product_order(w1, w2)
                if w >= 1:
                    terms.append(Term(c1 * c2, w))
        return FermatReal(
            self._std * other._std,
            terms,
            exact=self.exact,
            _scale=None if self.exact else self._magnitude() * other._magnitude(),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * invert(other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * invert(self)

    def __pow__(self, k):
        if isinstance(k, int) or (isinstance(k, Fraction) and k.denominator == 1):
            return pow_int(self, int(k))
        return NotImplemented

    # -- equality and order ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Rational, float)) and not isinstance(other, bool):
            return not self._terms and self._std == other
        if not isinstance(other, FermatReal):
            return NotImplemented
        return self._std == other._std and self._terms == other._terms

    def __hash__(self):
        if not self._terms:
            return hash(self._std)
        return hash((self._std, self._terms))

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    def __bool__(self):
        return bool(self._std) or bool(self._terms)

    # -- display -----------------------------------------------------------------

    def __str__(self):
        return format_fermat(self)

    def __repr__(self):
        return f"FermatReal({format_fermat(self)!r})"


def format_fermat(x: FermatReal) -> str:
    """Render a decomposition as ``2 + 3*dt_2 - 1/3*dt`` (terms by decreasing order)."""
    parts: list[tuple[int, str]] = []
    if x.std != 0 or not x.terms:
        s = sign(x.std)
        parts.append((s, format_scalar(abs(x.std))))
    for c, w in x.terms:
        name = "dt" if w == 1 else f"dt_{format_rational(w)}"
        mag = format_scalar(abs(c))
        parts.append((sign(c), name if mag == "1" else f"{mag}*{name}"))
    out = []
    for i, (s, body) in enumerate(parts):
        if i == 0:
            out.append(f"-{body}" if s < 0 else body)
        else:
            out.append(f" - {body}" if s < 0 else f" + {body}")
    return "".join(out)


ZERO = FermatReal(0)
ONE = FermatReal(1)


def dt(a) -> FermatReal:
    """The basic infinitesimal of order ``a`` (zero when ``a < 1``)."""
    a = as_fraction(a)
    if a <= 0:
        raise DomainError(f"dt: order must be positive, got {format_rational(a)}")
    if a < 1:
        return ZERO
    return FermatReal._raw(Fraction(0), (Term(Fraction(1), a),))


def term_pow(a, p) -> FermatReal:
    """``(dt_a) ** p`` for a real exponent ``p >= 1``, i.e. ``dt_{a/p}``."""
    a, p = as_fraction(a), as_fraction(p)
    if a <= 0:
        raise DomainError("term_pow: order must be positive")
    if p < 1:
        raise DomainError("term_pow: exponent must be >= 1")
    return dt(a / p)


def pow_int(x: FermatReal, k: int) -> FermatReal:
    if k < 0:
        raise DomainError("pow_int: exponent must be a natural number")
    result = FermatReal(1, exact=x.exact)
    base = x
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


# -- accessors of the decomposition ------------------------------------------------


def st(x: FermatReal) -> Scalar:
    return x.std


def std_parts(x: FermatReal) -> list:
    """``[st(x), c_1, ..., c_N]``."""
    return [x.std] + [c for c, _ in x.terms]


def orders(x: FermatReal) -> list:
    return [w for _, w in x.terms]


def order(x: FermatReal) -> Fraction:
    """The order of the leading infinitesimal term; undefined for standard reals."""
    if not x.terms:
        raise PartialityError("order is undefined for a standard real")
    return x.terms[0].order


def n_terms(x: FermatReal) -> int:
    return len(x.terms)


def is_infinitesimal(x: FermatReal) -> bool:
    return x.std == 0


def is_real(x: FermatReal) -> bool:
    return not x.terms


def is_invertible(x: FermatReal) -> bool:
    return x.std != 0


def in_ideal(x: FermatReal, a) -> bool:
    """Membership in ``D_a = {x : st x = 0, order(x) < a + 1}``; ``a`` may be ``math.inf``."""
    if x.std != 0:
        return False
    if not x.terms or a == math.inf:
        return True
    return x.terms[0].order < as_fraction(a) + 1


def nilpotent_power_is_zero(x: FermatReal, k: int) -> bool:
    """Decide ``x**k == 0`` from the decomposition alone."""
    if k <= 1:
        raise DomainError("nilpotent_power_is_zero needs k > 1")
    if x.std != 0:
        return False
    if not x.terms:
        return True
    return x.terms[0].order < k


def power_product_order(hs: Sequence[FermatReal], exponents: Sequence[int]) -> Optional[Fraction]:
    """Decide ``h_1**i_1 * ... * h_n**i_n`` for nonzero infinitesimals.

    Returns None when the product vanishes, otherwise the order of the product.
    """
    if len(hs) != len(exponents):
        raise DomainError("power_product_order: lists differ in length")
    total = Fraction(0)
    for h, i in zip(hs, exponents):
        if h.std != 0 or not h.terms:
            raise DomainError("power_product_order: factors must be nonzero infinitesimals")
        if i < 0:
            raise DomainError("power_product_order: exponents must be natural numbers")
        total += Fraction(i) / h.terms[0].order
    if total == 0:
        raise DomainError("power_product_order: at least one exponent must be positive")
    if total > 1:
        return None
    return 1 / total


def compare(x: FermatReal, y) -> int:
    """-1, 0 or 1 as ``x < y``, ``x == y``, ``x > y`` in the total order of Fermat reals.

    Standard parts decide first; on a tie the sign of ``x - y`` is the sign of
    the coefficient of its largest-order term.
    """
    if not isinstance(y, FermatReal):
        y = x._coerce(y)
    d = x - y
    if d.std != 0:
        return sign(d.std)
    if not d.terms:
        return 0
    return sign(d.terms[0].coef)


def invert(y: FermatReal) -> FermatReal:
    """Multiplicative inverse via the terminating geometric series in ``(y - st y)``."""
    r = y.std
    if r == 0:
        raise NotInvertible("divisor has zero standard part")
    inv_r = 1 / r
    if not y.terms:
        return FermatReal(inv_r, exact=y.exact)
    q = (y - r) * (-inv_r)
    n = math.floor(order(q))
    total = FermatReal(1, exact=y.exact)
    power = total
    for _ in range(n):
        power = power * q
        total = total + power
    return total * inv_r


def pseudo_distance(x: FermatReal, y: FermatReal) -> Scalar:
    if x.exact != y.exact:
        raise ModeError("cannot mix exact and approximate Fermat reals")
    return abs(x.std - y.std)


# -- representatives ------------------------------------------------------------------


def _exponent_lcm(x: FermatReal) -> int:
    lcm = 1
    for _, w in x.terms:
        lcm = math.lcm(lcm, (1 / w).denominator)
    return lcm


def exact_sample_index(x: FermatReal, m: int) -> int:
    """The index ``n`` with ``n + 1 = m**L``, at which every term of ``x`` samples rationally."""
    if m < 1:
        raise DomainError("exact_sample_index needs m >= 1")
    return m ** _exponent_lcm(x) - 1


def representative_sample(
    x: FermatReal,
    n: int,
    base: Optional[Callable[[int], object]] = None,
    *,
    exact: bool = True,
    dps: int = 50,
):
    """Value at index ``n`` of the canonical representative of ``x``.

    The representative is ``st x + sum c_i * s_n ** (1/w_i)`` with the null
    sequence ``s_n = 1/(n+1)`` unless ``base`` supplies another one.  With
    ``exact=True`` every fractional power must be rational (see
    :func:`exact_sample_index`) and a :class:`~fractions.Fraction` is returned;
    otherwise an :mod:`mpmath` value with ``dps`` digits.
    """
    if n < 0:
        raise DomainError("representative_sample needs n >= 0")
    s = Fraction(1, n + 1) if base is None else base(n)
    if exact:
        if not x.exact:
            raise PreconditionError("exact sampling of an approximate Fermat real")
        s = as_fraction(s)
        if s <= 0:
            raise PreconditionError("base sequence must be positive")
        total = x.std
        for c, w in x.terms:
            p = rational_power(s, 1 / w)
            if p is None:
                raise PreconditionError(
                    f"index {n} is not exact for order {format_rational(w)}; use exact_sample_index"
                )
            total += c * p
        return total
    with mpmath.workdps(dps):
        s = mpmath.mpf(s.numerator) / s.denominator if isinstance(s, Fraction) else mpmath.mpf(s)
        total = _mp(x.std)
        for c, w in x.terms:
            total += _mp(c) * s ** (mpmath.mpf(w.denominator) / w.numerator)
        return +total


def _mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def _positive_window(d: FermatReal) -> Fraction:
    """A ``delta = 2**-k <= 1`` such that ``st d + sum c_i t**(1/w_i) > 0`` on ``(0, delta)``.

    Requires ``d > 0`` and exact coefficients.  The bound is certified with
    exact integer arithmetic: writing ``a_1 < a_2 < ...`` for the exponents,
    the leading summand dominates once ``S * t**e <= c`` where ``S`` is the sum
    of absolute values of the remaining coefficients.
    """
    if d.std != 0:
        lead = abs(d.std)
        rest = [(c, 1 / w) for c, w in d.terms]
        base_exp = Fraction(0)
    else:
        lead = d.terms[0].coef
        rest = [(c, 1 / w) for c, w in d.terms[1:]]
        base_exp = 1 / d.terms[0].order
    if not rest:
        return Fraction(1)
    total = sum(abs(c) for c, _ in rest)
    gap = min(a for _, a in rest) - base_exp  # > 0
    ratio = lead / total
    # need delta ** gap <= ratio, i.e. delta ** p <= ratio ** q
    p, q = gap.numerator, gap.denominator
    target = ratio**q
    delta = Fraction(1)
    while delta**p > target:
        delta /= 2
    return delta


def sign_crossover_index(d: FermatReal) -> int:
    """An index past which every representative sample of ``d`` has the sign of ``d``."""
    if not d.exact:
        raise PreconditionError("crossover needs exact coefficients")
    if not d:
        return 0
    if compare(d, 0) < 0:
        d = -d
    delta = _positive_window(d)
    # 1/(n+1) < delta
    return math.floor(1 / delta)


def graph_points(x: FermatReal, delta, samples: int) -> list:
    """Points ``(p, t)`` of ``graph_delta(x)`` on the grid ``t = delta*k/samples``, ``k < samples``.

    The abscissa ``p = st x + sum c_i t**(1/w_i)`` is exact (a Fraction) when
    every power is rational, otherwise a float.  A standard real gives the
    vertical line ``p = st x``.
    """
    if delta <= 0:
        raise DomainError("graph_points: delta must be positive")
    if samples < 2:
        raise DomainError("graph_points: need at least two samples")
    if isinstance(delta, float):
        ts = [delta * k / samples for k in range(samples)]
    else:
        ts = [as_fraction(delta) * Fraction(k, samples) for k in range(samples)]
    points = []
    for t in ts:
        points.append((_graph_abscissa(x, t), t))
    return points


def _graph_abscissa(x: FermatReal, t):
    value = x.std
    inexact = not x.exact or isinstance(t, float)
    pieces = []
    for c, w in x.terms:
        if t == 0:
            continue
        if not inexact:
            p = rational_power(t, 1 / w)
            if p is not None:
                pieces.append(c * p)
                continue
        inexact = True
        pieces.append(float(c) * float(t) ** (1.0 / float(w)))
    if inexact:
        return float(value) + sum(float(v) for v in pieces)
    return value + sum(pieces, Fraction(0))


def separation_delta(x: FermatReal, y: FermatReal) -> Fraction:
    """A ``delta`` in ``(0, 1]`` such that ``graph_delta(x)`` lies strictly left of ``graph_delta(y)``
    for every ``t`` in ``(0, delta)``.  Requires ``x < y``."""
    if compare(x, y) >= 0:
        raise PreconditionError("separation_delta needs x < y")
    if not (x.exact and y.exact):
        raise PreconditionError("separation_delta needs exact coefficients")
    return _positive_window(y - x)

