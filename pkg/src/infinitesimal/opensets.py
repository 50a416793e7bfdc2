"""Open subsets of the reals and their Fermat extensions.

An open set ``U`` (a finite union of open intervals with rational or infinite
endpoints) extends to ``ext U = {x : st x in U}``.  Membership in the
extension, the propositional connectives of the intuitionistic transfer
theorem and the two quantifiers over open relations are all computed exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ._numbers import as_fraction
from .errors import DomainError, ParseError
from .fermat import FermatReal, st
from .realsets import INF, Interval, RealSet, parse_realset


@dataclass(frozen=True)
class OpenSet:
    """A canonical finite union of disjoint, non-adjacent open intervals."""

    region: RealSet = RealSet()

    def __post_init__(self):
        if not self.region.is_open():
            raise DomainError(f"{self.region} is not open")

    @classmethod
    def of(cls, *pairs) -> "OpenSet":
        """``OpenSet.of((0, 1), (2, 3))``; endpoints may be ``-INF``/``INF``."""
        ivs = [Interval(_end(lo), _end(hi)) for lo, hi in pairs]
        return cls(RealSet.from_intervals(ivs))

    @classmethod
    def empty(cls) -> "OpenSet":
        return cls()

    @classmethod
    def everything(cls) -> "OpenSet":
        return cls(RealSet.everything())

    @property
    def intervals(self) -> list[tuple]:
        return [(iv.lo, iv.hi) for iv in self.region.intervals()]

    def contains(self, v) -> bool:
        return self.region.contains(v)

    __contains__ = contains

    def is_empty(self) -> bool:
        return self.region.is_empty()

    def issubset(self, other: "OpenSet") -> bool:
        return self.region.issubset(other.region)

    def __str__(self):
        return str(self.region)

    def __repr__(self):
        return f"OpenSet({str(self)!r})"


def _end(v):
    return v if v in (INF, -INF) else as_fraction(v)


def parse_openset(text: str) -> OpenSet:
    region = parse_realset(text)
    if not region.is_open():
        raise ParseError(f"{text.strip()} is not an open set", 1)
    return OpenSet(region)


def member_ext(x: FermatReal, u: OpenSet) -> bool:
    """Whether ``x`` lies in the Fermat extension of ``u``, i.e. ``st x`` lies in ``u``."""
    return u.contains(as_fraction(st(x)))


def union(a: OpenSet, b: OpenSet) -> OpenSet:
    return OpenSet(a.region | b.region)


def intersect(a: OpenSet, b: OpenSet) -> OpenSet:
    return OpenSet(a.region & b.region)


def int_diff(a: OpenSet, b: OpenSet) -> OpenSet:
    """The interior of ``a \\ b``: the intuitionistic difference of open sets."""
    return OpenSet((a.region - b.region).interior())


# -- relations ----------------------------------------------------------------------


@dataclass(frozen=True)
class Rectangle:
    x: tuple  # open interval (lo, hi)
    y: tuple

    def __post_init__(self):
        for lo, hi in (self.x, self.y):
            if not lo < hi:
                raise DomainError(f"empty rectangle side ({lo}, {hi})")

    def contains(self, a, b) -> bool:
        return self.x[0] < a < self.x[1] and self.y[0] < b < self.y[1]


@dataclass(frozen=True)
class OpenRelation:
    """A finite union of open rectangles inside ``A x B``."""

    rectangles: tuple = ()

    @classmethod
    def of(cls, *rects) -> "OpenRelation":
        """``OpenRelation.of(((0, 1), (0, 1)), ...)``."""
        return cls(
            tuple(
                Rectangle((_end(x0), _end(x1)), (_end(y0), _end(y1)))
                for (x0, x1), (y0, y1) in rects
            )
        )

    def contains(self, a, b) -> bool:
        return any(r.contains(a, b) for r in self.rectangles)

    def check_inside(self, a: OpenSet, b: OpenSet) -> None:
        for r in self.rectangles:
            if not (OpenSet.of(r.x).issubset(a) and OpenSet.of(r.y).issubset(b)):
                raise DomainError(f"rectangle {r.x} x {r.y} is not inside the product")


def project_exists(c: OpenRelation) -> OpenSet:
    """``{a : exists b, (a, b) in C}``: the union of the rectangles' first sides."""
    return OpenSet(RealSet.from_intervals(Interval(*r.x) for r in c.rectangles))


def _cells(cuts: Iterable) -> list[tuple]:
    """Consecutive open intervals cut out of the line by the finite ``cuts``."""
    pts = [-INF] + sorted(set(cuts)) + [INF]
    return list(zip(pts, pts[1:]))


def _representative(lo, hi) -> Fraction:
    return Interval(lo, hi).midpoint()


def project_forall(c: OpenRelation, a: OpenSet, b: OpenSet) -> OpenSet:
    """``int(A \\ exists(int((A x B) \\ C)))``: the points of ``A`` related to every point of ``B``.

    ``(A x B) \\ C`` is cut into grid cells by every endpoint in sight.  A cell whose
    two sides are open intervals and which lies in ``A x B`` but misses ``C``
    belongs to the interior of the difference; lower-dimensional cells never add
    anything to the projection once the interior of the outer difference is taken,
    because their x-shadows are either covered by such a cell or are single points.
    """
    c.check_inside(a, b)
    xs = [v for r in c.rectangles for v in r.x] + list(a.region.points)
    ys = [v for r in c.rectangles for v in r.y] + list(b.region.points)
    bad = []
    for (x0, x1), (y0, y1) in itertools.product(_cells(xs), _cells(ys)):
        px, py = _representative(x0, x1), _representative(y0, y1)
        if a.contains(px) and b.contains(py) and not c.contains(px, py):
            bad.append(Interval(x0, x1))
    return int_diff(a, OpenSet(RealSet.from_intervals(bad)))
