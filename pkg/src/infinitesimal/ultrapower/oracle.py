"""A lazily built free ultrafilter on the eventually periodic sets.

The oracle keeps a list of committed sets whose intersection ``I`` is always
infinite.  A query ``S`` is answered from ``I`` when ``I`` already decides it
up to a finite set; otherwise the strategy picks ``S`` or its complement and
commits it.  Every answer is consistent with some free ultrafilter extending
the commitments, and repeated queries get repeated answers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..errors import ParseError
from .epset import EpSet, parse_epset


class Strategy(enum.Enum):
    PREFER_IN = "prefer-in"
    PREFER_OUT = "prefer-out"
    EVENS_FIRST = "evens-first"
    ODDS_FIRST = "odds-first"


@dataclass(frozen=True)
class LogEntry:
    query: EpSet
    dominant: bool

    def __str__(self):
        return f"Q {self.query} -> {'dominant' if self.dominant else 'rejected'}"


class FilterOracle:
    """Decides "dominant" for eventually periodic index sets.

    Not thread-safe: answers depend on the order of queries, so callers sharing
    an oracle must serialize access.
    """

    def __init__(self, strategy: Strategy | str = Strategy.PREFER_IN):
        self.strategy = Strategy(strategy)
        self.committed: list[EpSet] = []
        self.intersection = EpSet.all()
        self.log: list[LogEntry] = []
        seed = {Strategy.EVENS_FIRST: EpSet.evens(), Strategy.ODDS_FIRST: EpSet.odds()}.get(self.strategy)
        if seed is not None:
            self._commit(seed)

    def _commit(self, s: EpSet) -> None:
        self.committed.append(s)
        self.intersection = self.intersection & s
        assert self.intersection.is_infinite()

    def decide(self, s: EpSet) -> bool:
        """The verdict for ``s`` without logging it (commitments may still be made)."""
        if s.is_finite():
            return False
        if s.is_cofinite():
            return True
        inside = (s & self.intersection).is_infinite()
        outside = (self.intersection - s).is_infinite()
        if not outside:
            return True
        if not inside:
            return False
        if self.strategy is Strategy.PREFER_OUT:
            self._commit(s.complement())
            return False
        self._commit(s)
        return True

    def dominant(self, s: EpSet) -> bool:
        verdict = self.decide(s)
        self.log.append(LogEntry(s, verdict))
        return verdict

    __call__ = dominant

    def log_text(self) -> str:
        return "".join(f"{e}\n" for e in self.log)


def parse_log(text: str) -> list[LogEntry]:
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if not line.startswith("Q ") or " -> " not in line:
            raise ParseError(f"line {lineno}: expected 'Q <set> -> dominant|rejected'", 1)
        body, verdict = line[2:].rsplit(" -> ", 1)
        if verdict not in ("dominant", "rejected"):
            raise ParseError(f"line {lineno}: unknown verdict {verdict!r}", len(line) - len(verdict) + 1)
        entries.append(LogEntry(parse_epset(body), verdict == "dominant"))
    return entries


def replay(entries: list[LogEntry], strategy: Strategy | str) -> bool:
    """Whether a fresh oracle with ``strategy`` reproduces the logged verdicts."""
    oracle = FilterOracle(strategy)
    return all(oracle.dominant(e.query) == e.dominant for e in entries)


@dataclass
class AxiomReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_filter_axioms(entries: list[LogEntry]) -> AxiomReport:
    """Ultrafilter laws on the algebra of queried sets.

    Checks: no finite set is dominant; cofinite sets are; verdicts are functional;
    a set and its complement never share a verdict when both were asked;
    dominance is closed under queried supersets and queried intersections; and
    all dominant sets together have infinite intersection.
    """
    report = AxiomReport()
    verdict: dict = {}
    for e in entries:
        if verdict.setdefault(e.query, e.dominant) != e.dominant:
            report.violations.append(f"inconsistent answers for {e.query}")
    for s, v in verdict.items():
        if v and s.is_finite():
            report.violations.append(f"finite set {s} declared dominant")
        if not v and s.is_cofinite():
            report.violations.append(f"cofinite set {s} rejected")
        c = s.complement()
        if c in verdict and verdict[c] == v:
            report.violations.append(f"{s} and its complement both {'dominant' if v else 'rejected'}")
    dom = [s for s, v in verdict.items() if v]
    for s in dom:
        for t, v in verdict.items():
            if not v and s <= t:
                report.violations.append(f"superset {t} of dominant {s} rejected")
    for s in dom:
        for t in dom:
            both = s & t
            if verdict.get(both) is False:
                report.violations.append(f"intersection {both} of dominant sets rejected")
    meet = EpSet.all()
    for s in dom:
        meet = meet & s
    if not meet.is_infinite():
        report.violations.append("dominant sets have finite intersection")
    return report
