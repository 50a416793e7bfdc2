"""Piecewise power-sum sequences: the symbolic Cauchy sequences.

A :class:`SeqExpr` assigns a :class:`PowerSum` to each block of a partition of
the naturals into eventually periodic sets.  All blocks share the same limit,
so every such sequence is Cauchy.  Pointwise ring operations refine the two
partitions, and the index sets where a sequence is negative, zero or positive
are eventually periodic sets computed block by block.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .._numbers import as_fraction
from ..errors import DomainError
from ..realsets import RealSet
from .epset import EpSet
from .powersum import PowerSum, format_powersum


@dataclass(frozen=True, init=False)
class SeqExpr:
    branches: tuple  # ((EpSet, PowerSum), ...) partitioning the naturals

    def __init__(self, branches: Iterable):
        merged: dict = {}
        for block, u in branches:
            if not isinstance(u, PowerSum):
                u = PowerSum(as_fraction(u))
            if block.is_empty():
                continue
            merged[u] = merged[u] | block if u in merged else block
        cover = EpSet.none()
        for block in merged.values():
            if not (cover & block).is_empty():
                raise DomainError("sequence branches overlap")
            cover = cover | block
        if cover != EpSet.all():
            raise DomainError("sequence branches do not cover every index")
        limits = {u.const for u in merged}
        if len(limits) > 1:
            raise DomainError(
                "branches converge to different limits "
                + ", ".join(str(c) for c in sorted(limits))
                + "; the sequence is not Cauchy"
            )
        ordered = sorted(merged.items(), key=lambda item: (str(item[1]), str(item[0])))
        object.__setattr__(self, "branches", tuple((b, u) for u, b in ordered))

    @classmethod
    def of(cls, u) -> "SeqExpr":
        """The sequence given by one power sum (or rational constant) at every index."""
        return cls([(EpSet.all(), u)])

    @classmethod
    def piecewise(cls, *pairs) -> "SeqExpr":
        return cls(pairs)

    # -- pointwise operations -----------------------------------------------------

    def combine(self, other: "SeqExpr", op: Callable[[PowerSum, PowerSum], PowerSum]) -> "SeqExpr":
        out = []
        for a, u in self.branches:
            for b, v in other.branches:
                block = a & b
                if not block.is_empty():
                    out.append((block, op(u, v)))
        return SeqExpr(out)

    def map(self, op: Callable[[PowerSum], PowerSum]) -> "SeqExpr":
        return SeqExpr([(a, op(u)) for a, u in self.branches])

    def __add__(self, other):
        return self.combine(_seq(other), lambda u, v: u + v)

    __radd__ = __add__

    def __sub__(self, other):
        return self.combine(_seq(other), lambda u, v: u - v)

    def __rsub__(self, other):
        return _seq(other) - self

    def __mul__(self, other):
        return self.combine(_seq(other), lambda u, v: u * v)

    __rmul__ = __mul__

    def __neg__(self):
        return self.map(lambda u: -u)

    def __pow__(self, k: int):
        return self.map(lambda u: u**k)

    # -- values and index sets -----------------------------------------------------

    @property
    def limit(self) -> Fraction:
        return self.branches[0][1].const

    def branch_at(self, n: int) -> PowerSum:
        for block, u in self.branches:
            if n in block:
                return u
        raise AssertionError("partition does not cover the index")

    def exact_value(self, n: int) -> Optional[Fraction]:
        return self.branch_at(n).exact_value(n)

    def value(self, n: int, dps: int = 30):
        return self.branch_at(n).value(n, dps)

    def sign_sets(self) -> tuple[EpSet, EpSet, EpSet]:
        """``({n : x_n < 0}, {n : x_n = 0}, {n : x_n > 0})``."""
        neg, zero, pos = EpSet.none(), EpSet.none(), EpSet.none()
        for block, u in self.branches:
            sn, sz, sp = u.sign_sets()
            neg, zero, pos = neg | (block & sn), zero | (block & sz), pos | (block & sp)
        return neg, zero, pos

    def membership_set(self, region: RealSet) -> EpSet:
        """``{n : x_n in region}``."""
        return membership_from_signs(lambda p: (self - p).sign_sets(), region)

    def __str__(self):
        if len(self.branches) == 1:
            return format_powersum(self.branches[0][1])
        return "; ".join(f"{b}: {format_powersum(u)}" for b, u in self.branches)

    def __repr__(self):
        return f"SeqExpr({str(self)!r})"


def _seq(x) -> SeqExpr:
    if isinstance(x, SeqExpr):
        return x
    return SeqExpr.of(x)


def membership_from_signs(signs_at: Callable, region: RealSet, within: EpSet = None) -> EpSet:
    """Index set where a sequence lies in ``region``, from its signs relative to breakpoints.

    ``signs_at(p)`` returns the (negative, zero, positive) index sets of ``x - p``.
    """
    pts = region.points
    within = EpSet.all() if within is None else within
    if not pts:
        return within if region.gap_in[0] else EpSet.none()
    sets = [signs_at(p) for p in pts]
    out = EpSet.none()
    for i, p in enumerate(pts):
        if region.point_in[i]:
            out = out | sets[i][1]
    for i, inside in enumerate(region.gap_in):
        if not inside:
            continue
        gap = within
        if i > 0:
            gap = gap & sets[i - 1][2]
        if i < len(pts):
            gap = gap & sets[i][0]
        out = out | gap
    return out & within
