"""Finite Boolean combinations of rational intervals.

A :class:`RealSet` is stored as sorted breakpoints together with a membership
flag for each breakpoint and for each of the gaps between them.  Every Boolean
operation is then a pointwise combination over the merged breakpoints, and the
interior and closure operators only look at a point and its two neighbouring
gaps.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from ._numbers import as_fraction, format_rational
from .errors import ParseError

INF = float("inf")


@dataclass(frozen=True)
class Interval:
    """An interval with rational (or infinite) endpoints."""

    lo: object  # Fraction or -INF
    hi: object  # Fraction or INF
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        if self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed)):
            raise ValueError(f"empty interval {self.lo}..{self.hi}")
        if (self.lo == -INF and self.lo_closed) or (self.hi == INF and self.hi_closed):
            raise ValueError("infinite endpoints are always open")

    @property
    def is_open(self) -> bool:
        return not self.lo_closed and not self.hi_closed

    def contains(self, v) -> bool:
        if v < self.lo or v > self.hi:
            return False
        if v == self.lo and not self.lo_closed:
            return False
        return not (v == self.hi and not self.hi_closed)

    def midpoint(self) -> Fraction:
        """A rational point inside the interval."""
        if self.lo == -INF and self.hi == INF:
            return Fraction(0)
        if self.lo == -INF:
            return self.hi - 1
        if self.hi == INF:
            return self.lo + 1
        return (self.lo + self.hi) / 2

    def __str__(self):
        if self.lo == self.hi:
            return "{" + format_rational(self.lo) + "}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{_fmt_end(self.lo)},{_fmt_end(self.hi)}{right}"


def _fmt_end(v) -> str:
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return format_rational(v)


def _coerce_end(v):
    if v in (INF, -INF):
        return v
    return as_fraction(v)


@dataclass(frozen=True)
class RealSet:
    points: tuple = ()  # sorted Fractions
    point_in: tuple = ()  # one flag per point
    gap_in: tuple = (False,)  # len(points) + 1 flags; gap_in[i] covers the gap left of points[i]

    def __post_init__(self):
        if len(self.point_in) != len(self.points) or len(self.gap_in) != len(self.points) + 1:
            raise ValueError("flag lengths do not match the breakpoints")
        if any(a >= b for a, b in zip(self.points, self.points[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    # -- construction --------------------------------------------------------------

    @classmethod
    def _build(cls, points, point_in, gap_in) -> "RealSet":
        """Canonical form: drop breakpoints that do not change membership."""
        pts, pin, gin = [], [], [gap_in[0]]
        for i, p in enumerate(points):
            if point_in[i] == gin[-1] == gap_in[i + 1]:
                continue
            pts.append(p)
            pin.append(point_in[i])
            gin.append(gap_in[i + 1])
        return cls(tuple(pts), tuple(pin), tuple(gin))

    @classmethod
    def empty(cls) -> "RealSet":
        return cls()

    @classmethod
    def everything(cls) -> "RealSet":
        return cls((), (), (True,))

    @classmethod
    def interval(cls, lo, hi, lo_closed=False, hi_closed=False) -> "RealSet":
        iv = Interval(_coerce_end(lo), _coerce_end(hi), lo_closed, hi_closed)
        return cls.from_intervals([iv])

    @classmethod
    def point(cls, v) -> "RealSet":
        v = as_fraction(v)
        return cls((v,), (True,), (False, False))

    @classmethod
    def from_intervals(cls, intervals) -> "RealSet":
        out = cls.empty()
        for iv in intervals:
            if iv.lo == iv.hi:
                out = out | cls.point(iv.lo)
                continue
            pts, pin, gin = [], [], [iv.lo == -INF]
            if iv.lo != -INF:
                pts.append(iv.lo)
                pin.append(iv.lo_closed)
                gin.append(True)
            if iv.hi != INF:
                pts.append(iv.hi)
                pin.append(iv.hi_closed)
                gin.append(False)
            out = out | cls._build(pts, pin, gin)
        return out

    # -- queries -------------------------------------------------------------------

    def contains(self, v) -> bool:
        v = _coerce_end(v)
        if v in (INF, -INF):
            raise ValueError("membership is only defined for finite reals")
        i = bisect.bisect_left(self.points, v)
        if i < len(self.points) and self.points[i] == v:
            return self.point_in[i]
        return self.gap_in[i]

    __contains__ = contains

    def is_empty(self) -> bool:
        return not any(self.point_in) and not any(self.gap_in)

    def is_open(self) -> bool:
        return self == self.interior()

    def is_closed(self) -> bool:
        return self == self.closure()

    def intervals(self) -> list[Interval]:
        """Maximal intervals, left to right."""
        out = []
        start = None  # (lo, lo_closed) of the run being built
        if self.gap_in[0]:
            start = (-INF, False)
        for i, p in enumerate(self.points):
            if start is not None:
                if self.point_in[i] and self.gap_in[i + 1]:
                    continue
                out.append(Interval(start[0], p, start[1], self.point_in[i]))
                start = None
            elif self.point_in[i] and not self.gap_in[i + 1]:
                out.append(Interval(p, p, True, True))
            if start is None and self.gap_in[i + 1]:
                start = (p, self.point_in[i])
        if start is not None:
            out.append(Interval(start[0], INF, start[1], False))
        return out

    def breakpoints(self) -> tuple:
        return self.points

    # -- algebra -------------------------------------------------------------------

    def _combine(self, other: "RealSet", op: Callable[[bool, bool], bool]) -> "RealSet":
        pts = sorted(set(self.points) | set(other.points))
        pin = [op(self.contains(p), other.contains(p)) for p in pts]
        gin = [op(self._gap_at(pts, i), other._gap_at(pts, i)) for i in range(len(pts) + 1)]
        return RealSet._build(pts, pin, gin)

    def _gap_at(self, pts, i) -> bool:
        """Membership on the i-th gap of a refinement ``pts`` of this set's breakpoints."""
        if not pts:
            return self.gap_in[0]
        if i == 0:
            probe = pts[0] - 1
        elif i == len(pts):
            probe = pts[-1] + 1
        else:
            probe = (pts[i - 1] + pts[i]) / 2
        return self.contains(probe)

    def __or__(self, other):
        return self._combine(other, lambda a, b: a or b)

    def __and__(self, other):
        return self._combine(other, lambda a, b: a and b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a and not b)

    def __xor__(self, other):
        return self._combine(other, lambda a, b: a != b)

    def complement(self) -> "RealSet":
        return RealSet(self.points, tuple(not f for f in self.point_in), tuple(not f for f in self.gap_in))

    __invert__ = complement

    def interior(self) -> "RealSet":
        pin = [f and self.gap_in[i] and self.gap_in[i + 1] for i, f in enumerate(self.point_in)]
        return RealSet._build(self.points, pin, self.gap_in)

    def closure(self) -> "RealSet":
        pin = [f or self.gap_in[i] or self.gap_in[i + 1] for i, f in enumerate(self.point_in)]
        return RealSet._build(self.points, pin, self.gap_in)

    def issubset(self, other: "RealSet") -> bool:
        return (self - other).is_empty()

    def __le__(self, other):
        return self.issubset(other)

    def __str__(self):
        ivs = self.intervals()
        return "u".join(str(iv) for iv in ivs) if ivs else "{}"

    def __repr__(self):
        return f"RealSet({str(self)!r})"


# -- text form ----------------------------------------------------------------------

_END = r"\s*(-?inf|[-+]?\d+(?:\.\d+)?(?:/\d+)?)\s*"
_INTERVAL_RE = re.compile(r"\s*([(\[])" + _END + "," + _END + r"([)\]])\s*")
_POINTS_RE = re.compile(r"\s*\{([^}]*)\}\s*")


def _parse_end(text: str):
    if text == "inf":
        return INF
    if text == "-inf":
        return -INF
    return Fraction(text)


def parse_realset(text: str) -> RealSet:
    """Parse ``(0,1)u[2,3]u{5,7}``; ``{}`` is the empty set."""
    out = RealSet.empty()
    pos = 0
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty set text; write {} for the empty set", 1)
    while True:
        m = _INTERVAL_RE.match(text, pos)
        if m:
            lo, hi = _parse_end(m.group(2)), _parse_end(m.group(3))
            try:
                out = out | RealSet.from_intervals(
                    [Interval(lo, hi, m.group(1) == "[", m.group(4) == "]")]
                )
            except ValueError as exc:
                raise ParseError(str(exc), pos + 1) from None
        else:
            m = _POINTS_RE.match(text, pos)
            if not m:
                raise ParseError("expected an interval such as (0,1)", pos + 1)
            body = m.group(1).strip()
            if body:
                for item in body.split(","):
                    try:
                        out = out | RealSet.point(Fraction(item.strip()))
                    except ValueError:
                        raise ParseError(f"bad point {item.strip()!r}", pos + 1) from None
        pos = m.end()
        if pos == len(text):
            return out
        if text[pos] != "u":
            raise ParseError(f"expected 'u', found {text[pos]!r}", pos + 1)
        pos += 1


def sample_point(s: RealSet) -> Optional[Fraction]:
    """Some rational member of ``s``, or None when it is empty."""
    for iv in s.intervals():
        return iv.midpoint()
    return None
