"""Eventually periodic subsets of the natural numbers.

An :class:`EpSet` agrees with an explicit bit list below a threshold ``N0`` and
with a residue pattern modulo ``m`` from ``N0`` on.  The family is a Boolean
algebra, membership is decidable, and "infinite" and "cofinite" are read off
the residue pattern, which is all an ultrafilter oracle needs to know.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable

from ..errors import ParseError


@dataclass(frozen=True)
class EpSet:
    threshold: int = 0
    period: int = 1
    residues: frozenset = frozenset()
    bits: int = 0  # bit n gives membership of n < threshold

    def __post_init__(self):
        if self.period < 1 or self.threshold < 0 or self.bits >> self.threshold:
            raise ValueError("malformed EpSet")
        if any(not 0 <= r < self.period for r in self.residues):
            raise ValueError("residue out of range")

    # -- construction --------------------------------------------------------------

    @classmethod
    def build(cls, threshold: int, period: int, residues: Iterable[int], prefix: Iterable[bool]) -> "EpSet":
        """Canonical form from explicit prefix bits: minimal period, then minimal threshold."""
        bits = 0
        for n, b in enumerate(prefix):
            if b:
                bits |= 1 << n
        return cls.from_bits(threshold, period, residues, bits)

    @classmethod
    def from_bits(cls, threshold: int, period: int, residues: Iterable[int], bits: int) -> "EpSet":
        residues = frozenset(r % period for r in residues)
        for d in _divisors(period):
            folded = {r % d for r in residues}
            if all((r % d in folded) == (r in residues) for r in range(period)):
                residues, period = frozenset(folded), d
                break
        bits &= (1 << threshold) - 1
        # drop the top of the prefix where it already follows the periodic pattern
        threshold = (bits ^ _pattern_mask(period, residues, threshold)).bit_length()
        return cls(threshold, period, residues, bits & ((1 << threshold) - 1))

    @classmethod
    def from_predicate(cls, pred: Callable[[int], bool], threshold: int, period: int) -> "EpSet":
        """The set of ``n`` with ``pred(n)``, assuming ``pred`` is ``period``-periodic from ``threshold``."""
        residues = [r for r in range(period) if pred(threshold + (r - threshold) % period)]
        return cls.build(threshold, period, residues, [pred(n) for n in range(threshold)])

    @classmethod
    def from_runs(cls, runs: Iterable[tuple], threshold: int, tail: bool) -> "EpSet":
        """Members are the half-open ranges ``[a, b)`` below ``threshold``, then all or nothing."""
        bits = 0
        for a, b in runs:
            if b > a:
                bits |= ((1 << (b - a)) - 1) << a
        return cls.from_bits(threshold, 1, [0] if tail else [], bits)

    @classmethod
    def none(cls) -> "EpSet":
        return cls()

    @classmethod
    def all(cls) -> "EpSet":
        return cls(0, 1, frozenset({0}), 0)

    @classmethod
    def residue(cls, modulus: int, r: int) -> "EpSet":
        return cls.build(0, modulus, [r], [])

    @classmethod
    def evens(cls) -> "EpSet":
        return cls.residue(2, 0)

    @classmethod
    def odds(cls) -> "EpSet":
        return cls.residue(2, 1)

    @classmethod
    def at_least(cls, k: int) -> "EpSet":
        return cls.from_bits(max(k, 0), 1, [0], 0)

    @classmethod
    def finite(cls, elements: Iterable[int]) -> "EpSet":
        elements = {int(e) for e in elements}
        if any(e < 0 for e in elements):
            raise ValueError("natural numbers only")
        top = max(elements, default=-1) + 1
        return cls.build(top, 1, [], [n in elements for n in range(top)])

    # -- queries -------------------------------------------------------------------

    @property
    def prefix(self) -> tuple:
        """Membership bits for ``n < threshold``."""
        return tuple(bool(self.bits >> n & 1) for n in range(self.threshold))

    def __contains__(self, n: int) -> bool:
        if n < 0:
            return False
        if n < self.threshold:
            return bool(self.bits >> n & 1)
        return n % self.period in self.residues

    def is_infinite(self) -> bool:
        return bool(self.residues)

    def is_finite(self) -> bool:
        return not self.residues

    def is_cofinite(self) -> bool:
        return len(self.residues) == self.period

    def is_empty(self) -> bool:
        return not self.residues and not self.bits

    def elements(self, limit: int) -> list[int]:
        """Members below ``limit``."""
        return [n for n in range(limit) if n in self]

    def first(self, start: int = 0):
        """The least member ``>= start``, or None."""
        for n in range(start, max(start, self.threshold) + self.period):
            if n in self:
                return n
        return None

    # -- algebra -------------------------------------------------------------------

    def _extended_bits(self, upto: int) -> int:
        """Membership bits of every ``n < upto`` (``upto >= threshold``)."""
        tail = _pattern_mask(self.period, self.residues, upto) & ~((1 << self.threshold) - 1)
        return self.bits | tail

    def _combine(self, other: "EpSet", op: Callable[[int, int], int], res_op) -> "EpSet":
        threshold = max(self.threshold, other.threshold)
        period = math.lcm(self.period, other.period)
        full = (1 << threshold) - 1
        bits = op(self._extended_bits(threshold), other._extended_bits(threshold)) & full
        residues = [
            r for r in range(period)
            if res_op(r % self.period in self.residues, r % other.period in other.residues)
        ]
        return EpSet.from_bits(threshold, period, residues, bits)

    def __and__(self, other):
        return self._combine(other, lambda a, b: a & b, lambda a, b: a and b)

    def __or__(self, other):
        return self._combine(other, lambda a, b: a | b, lambda a, b: a or b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a & ~b, lambda a, b: a and not b)

    def __xor__(self, other):
        return self._combine(other, lambda a, b: a ^ b, lambda a, b: a != b)

    def complement(self) -> "EpSet":
        return EpSet(
            self.threshold,
            self.period,
            frozenset(range(self.period)) - self.residues,
            ~self.bits & ((1 << self.threshold) - 1),
        )

    __invert__ = complement

    def issubset(self, other: "EpSet") -> bool:
        return (self - other).is_empty()

    def __le__(self, other):
        return self.issubset(other)

    def almost_subset(self, other: "EpSet") -> bool:
        """Inclusion up to finitely many exceptions."""
        return (self - other).is_finite()

    def preimage_affine(self, a: int, b: int) -> "EpSet":
        """``{n : a*n + b in self}`` for integers ``a >= 1`` and ``b >= 0``."""
        if a < 1 or b < 0:
            raise ValueError("need a >= 1 and b >= 0")
        threshold = max(0, -(-(self.threshold - b) // a))
        return EpSet.from_predicate(lambda n: a * n + b in self, threshold, self.period)

    # -- text form -----------------------------------------------------------------

    def __str__(self):
        res = ",".join(str(r) for r in sorted(self.residues))
        bits = format(self.bits, "b").zfill(self.threshold)[::-1] if self.threshold else ""
        return f"per({self.period}){{{res}}};N0={self.threshold};pre={bits}"

    def __repr__(self):
        return f"EpSet({str(self)!r})"


def _pattern_mask(period: int, residues: frozenset, upto: int) -> int:
    """Bits ``n < upto`` of the purely periodic set ``{n : n % period in residues}``."""
    if not residues or upto <= 0:
        return 0
    block = sum(1 << r for r in residues)
    reps = -(-upto // period)
    # block repeated reps times: block * (1 + 2**p + 2**(2p) + ...)
    full = block * (((1 << (period * reps)) - 1) // ((1 << period) - 1))
    return full & ((1 << upto) - 1)


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


_TEXT_RE = re.compile(r"per\((\d+)\)\{([\d,\s]*)\};N0=(\d+);pre=([01]*)$")


def parse_epset(text: str) -> EpSet:
    m = _TEXT_RE.match(text.strip())
    if not m:
        raise ParseError(f"not an EpSet: {text.strip()!r}", 1)
    period, threshold, bits = int(m.group(1)), int(m.group(3)), m.group(4)
    residues = [int(r) for r in m.group(2).split(",") if r.strip()]
    if len(bits) != threshold or period < 1 or any(r >= period for r in residues):
        raise ParseError(f"inconsistent EpSet: {text.strip()!r}", 1)
    return EpSet.build(threshold, period, residues, [b == "1" for b in bits])
