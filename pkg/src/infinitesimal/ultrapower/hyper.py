"""Classes of Cauchy sequences modulo a free ultrafilter, and their fractions.

Ring operations act on representatives and need no oracle.  Equality, order,
membership and infinitesimality are decided by computing the relevant index
set exactly and asking a :class:`FilterOracle` whether it is dominant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .._numbers import as_fraction
from ..errors import DivisionByZero, DomainError
from ..realsets import RealSet
from .. import smooth
from .epset import EpSet
from .oracle import FilterOracle
from .powersum import PowerSum
from .sequence import SeqExpr, membership_from_signs


@dataclass(frozen=True)
class Hyper:
    seq: SeqExpr

    @classmethod
    def const(cls, c) -> "Hyper":
        return cls(SeqExpr.of(as_fraction(c)))

    @classmethod
    def of(cls, u) -> "Hyper":
        """From a PowerSum, a rational, a SeqExpr or a list of ``(EpSet, PowerSum)`` branches."""
        if isinstance(u, Hyper):
            return u
        if isinstance(u, SeqExpr):
            return cls(u)
        if isinstance(u, (list, tuple)):
            return cls(SeqExpr(u))
        return cls(SeqExpr.of(u))

    @classmethod
    def h(cls, q=1, coef=1) -> "Hyper":
        """``[coef * (n+1)**(-q)]``."""
        return cls(SeqExpr.of(PowerSum.power(q, coef)))

    def __add__(self, other):
        return Hyper(self.seq + _hyper(other).seq)

    __radd__ = __add__

    def __sub__(self, other):
        return Hyper(self.seq - _hyper(other).seq)

    def __rsub__(self, other):
        return _hyper(other) - self

    def __mul__(self, other):
        return Hyper(self.seq * _hyper(other).seq)

    __rmul__ = __mul__

    def __neg__(self):
        return Hyper(-self.seq)

    def __pow__(self, k: int):
        return Hyper(self.seq**k)

    def __str__(self):
        return f"[{self.seq}]"


def _hyper(x) -> Hyper:
    return x if isinstance(x, Hyper) else Hyper.of(x)


def hyper_add(x, y) -> Hyper:
    return _hyper(x) + _hyper(y)


def hyper_mul(x, y) -> Hyper:
    return _hyper(x) * _hyper(y)


def hyper_neg(x) -> Hyper:
    return -_hyper(x)


# -- decisions ------------------------------------------------------------------------


def eq_set(x, y) -> EpSet:
    return (_hyper(x) - _hyper(y)).seq.sign_sets()[1]


def le_set(x, y) -> EpSet:
    neg, zero, _ = (_hyper(x) - _hyper(y)).seq.sign_sets()
    return neg | zero


def hyper_eq(o: FilterOracle, x, y) -> bool:
    return o.dominant(eq_set(x, y))


def hyper_le(o: FilterOracle, x, y) -> bool:
    return o.dominant(le_set(x, y))


def hyper_lt(o: FilterOracle, x, y) -> bool:
    return not hyper_le(o, y, x)


def hyper_sign(o: FilterOracle, x) -> int:
    neg, zero, _ = _hyper(x).seq.sign_sets()
    if o.dominant(zero):
        return 0
    return -1 if o.dominant(neg) else 1


def st_hyper(x) -> Fraction:
    """The standard part: the common limit of the representative."""
    return _hyper(x).seq.limit


def pseudo_distance_hyper(x, y) -> Fraction:
    return abs(st_hyper(x) - st_hyper(y))


def is_infinitesimal_hyper(o: FilterOracle, x, bound: int = 10) -> bool:
    """Whether ``-1/k < x < 1/k`` for every tested ``k``.

    The tested ``k`` are ``1..bound`` together with ``floor(1/|st x|) + 1`` when the
    standard part is nonzero, which is the first ``k`` able to separate ``x`` from 0.
    The verdict must agree with ``st x == 0``; a disagreement raises.
    """
    x = _hyper(x)
    c = st_hyper(x)
    ks = list(range(1, bound + 1))
    if c != 0:
        ks.append(int(1 / abs(c)) + 1)
    verdict = all(
        hyper_lt(o, Fraction(-1, k), x) and hyper_lt(o, x, Fraction(1, k)) for k in ks
    )
    if verdict != (c == 0):
        raise AssertionError(f"infinitesimal test disagrees with the standard part of {x}")
    return verdict


def star_apply_poly(p: smooth.Expr, xs: Sequence) -> Hyper:
    """Pointwise application of a polynomial expression."""
    out = smooth.evaluate(p, [_hyper(x) for x in xs])
    return _hyper(out)


def star_member(o: FilterOracle, x, region: RealSet) -> bool:
    """Whether ``x`` lies in the extension of ``region``: ``{n : x_n in region}`` is dominant."""
    return o.dominant(_hyper(x).seq.membership_set(region))


# -- fractions -------------------------------------------------------------------------


@dataclass(frozen=True)
class HyperFrac:
    num: Hyper
    den: Hyper

    @classmethod
    def make(cls, o: FilterOracle, num, den) -> "HyperFrac":
        den = _hyper(den)
        if hyper_eq(o, den, 0):
            raise DivisionByZero("frac: denominator is zero on a dominant set")
        return cls(_hyper(num), den)

    @classmethod
    def of(cls, x) -> "HyperFrac":
        return cls(_hyper(x), Hyper.const(1))

    def __str__(self):
        return f"{self.num}/{self.den}"


def _frac(x) -> HyperFrac:
    return x if isinstance(x, HyperFrac) else HyperFrac.of(x)


def frac_add(x, y) -> HyperFrac:
    x, y = _frac(x), _frac(y)
    return HyperFrac(x.num * y.den + y.num * x.den, x.den * y.den)


def frac_sub(x, y) -> HyperFrac:
    x, y = _frac(x), _frac(y)
    return HyperFrac(x.num * y.den - y.num * x.den, x.den * y.den)


def frac_mul(x, y) -> HyperFrac:
    x, y = _frac(x), _frac(y)
    return HyperFrac(x.num * y.num, x.den * y.den)


def frac_div(o: FilterOracle, x, y) -> HyperFrac:
    x, y = _frac(x), _frac(y)
    return HyperFrac.make(o, x.num * y.den, x.den * y.num)


def frac_eq(o: FilterOracle, x, y) -> bool:
    x, y = _frac(x), _frac(y)
    return hyper_eq(o, x.num * y.den, y.num * x.den)


def _branch_pairs(x: HyperFrac):
    """``(block, u, v)`` over the common refinement of numerator and denominator."""
    for a, u in x.num.seq.branches:
        for b, v in x.den.seq.branches:
            block = a & b
            if not block.is_empty():
                yield block, u, v


def _branch_limit(u: PowerSum, v: PowerSum):
    """``lim u/v`` from leading terms: a Fraction, ``inf`` for divergence, None if v is zero."""
    lv = v.leading()
    if lv is None:
        return None
    lu = u.leading()
    if lu is None or lu[1] > lv[1]:
        return Fraction(0)
    if lu[1] == lv[1]:
        return lu[0] / lv[0]
    return float("inf")


def frac_st(x) -> Optional[Fraction]:
    """``lim num/den`` when every infinite block gives the same finite limit, else None.

    Blocks on which the denominator vanishes identically carry no quotient and are
    skipped.
    """
    limits = set()
    for block, u, v in _branch_pairs(_frac(x)):
        if block.is_infinite():
            lim = _branch_limit(u, v)
            if lim is not None:
                limits.add(lim)
    if len(limits) != 1:
        return None
    (lim,) = limits
    return None if lim == float("inf") else lim


def is_infinite_frac(o: FilterOracle, x) -> bool:
    """Whether ``|x| > N`` for every real ``N``: the blocks where the quotient diverges are dominant."""
    divergent = EpSet.none()
    for block, u, v in _branch_pairs(_frac(x)):
        if _branch_limit(u, v) == float("inf"):
            divergent = divergent | block
    return o.dominant(divergent)


def frac_member(o: FilterOracle, x, region: RealSet) -> bool:
    """Whether ``{n : v_n != 0 and u_n / v_n in region}`` is dominant."""
    x = _frac(x)
    _, den_zero, _ = x.den.seq.sign_sets()
    den_neg, _, den_pos = x.den.seq.sign_sets()

    def signs(p):
        a_neg, a_zero, a_pos = (x.num - x.den * p).seq.sign_sets()
        neg = (a_neg & den_pos) | (a_pos & den_neg)
        pos = (a_pos & den_pos) | (a_neg & den_neg)
        return neg, a_zero - den_zero, pos

    return o.dominant(membership_from_signs(signs, region, within=~den_zero))


def frac_member_naturals(o: FilterOracle, x, indices: EpSet) -> bool:
    """Whether ``x`` lies in the extension of a set of positive integers.

    ``indices`` lists the integers ``k >= 0``; supported quotients are those equal to
    ``a*(n+1)`` on every block, with ``a`` a positive integer.
    """
    x = _frac(x)
    hit = EpSet.none()
    for block, u, v in _branch_pairs(x):
        ratio = _affine_ratio(u, v)
        if ratio is None:
            raise DomainError("frac_member_naturals: quotient is not a positive integer multiple of n+1")
        hit = hit | (block & indices.preimage_affine(ratio, ratio))
    return o.dominant(hit)


def _affine_ratio(u: PowerSum, v: PowerSum) -> Optional[int]:
    if len(v.all_terms()) != 1 or len(u.all_terms()) != 1:
        return None
    (a, p), (b, q) = u.all_terms()[0], v.all_terms()[0]
    if q - p != 1:
        return None
    r = a / b
    return r.numerator if r.denominator == 1 and r > 0 else None
