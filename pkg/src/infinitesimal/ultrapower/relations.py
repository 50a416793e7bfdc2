"""Extensions of open rectangle relations to classes of sequences."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ContinuityCounterexample
from ..opensets import OpenRelation, OpenSet, Rectangle, project_exists
from ..realsets import Interval, RealSet
from .epset import EpSet
from .hyper import Hyper, _hyper, star_member
from .oracle import FilterOracle


def _side(interval: tuple) -> RealSet:
    return RealSet.from_intervals([Interval(*interval)])


def pair_set(c: OpenRelation, x, y) -> EpSet:
    """``{n : (x_n, y_n) in C}``."""
    xs, ys = _hyper(x).seq, _hyper(y).seq
    out = EpSet.none()
    for r in c.rectangles:
        out = out | (xs.membership_set(_side(r.x)) & ys.membership_set(_side(r.y)))
    return out


def star_pair_member(o: FilterOracle, c: OpenRelation, x, y) -> bool:
    return o.dominant(pair_set(c, x, y))


def dom(c: OpenRelation) -> OpenSet:
    return project_exists(c)


def cod(c: OpenRelation) -> OpenSet:
    return project_exists(OpenRelation(tuple(Rectangle(r.y, r.x) for r in c.rectangles)))


@dataclass(frozen=True)
class Witness:
    value: Hyper
    rectangle: Rectangle


def exists_witness(o: FilterOracle, c: OpenRelation, x) -> Witness:
    """A ``y`` with ``(x, y)`` in the extension of ``C``, for ``x`` in the extension of ``dom C``.

    Rectangles are tried in order; the first whose x-side catches ``x`` on a dominant
    set supplies the constant midpoint of its y-side.  Some rectangle must succeed
    because the oracle is an ultrafilter on the queried sets, so a failure means the
    premise was false.
    """
    x = _hyper(x)
    for r in c.rectangles:
        if star_member(o, x, _side(r.x)):
            y = Hyper.const(Interval(*r.y).midpoint())
            return Witness(y, r)
    raise ContinuityCounterexample(f"no rectangle of the relation catches {x} on a dominant set")
