"""Cauchy sequences modulo a lazily built free ultrafilter.

``EpSet`` index sets, ``PowerSum`` and ``SeqExpr`` sequences, the
``FilterOracle`` deciding dominance, and the ring of classes ``Hyper`` with its
fraction field ``HyperFrac``.
"""

from .epset import EpSet, parse_epset
from .hyper import (
    Hyper,
    HyperFrac,
    frac_add,
    frac_div,
    frac_eq,
    frac_member,
    frac_member_naturals,
    frac_mul,
    frac_st,
    frac_sub,
    hyper_add,
    hyper_eq,
    hyper_le,
    hyper_lt,
    hyper_mul,
    hyper_neg,
    hyper_sign,
    is_infinite_frac,
    is_infinitesimal_hyper,
    pseudo_distance_hyper,
    st_hyper,
    star_apply_poly,
    star_member,
)
from .oracle import FilterOracle, LogEntry, Strategy, check_filter_axioms, parse_log, replay
from .powersum import PowerSum
from .relations import cod, dom, exists_witness, pair_set, star_pair_member
from .sequence import SeqExpr

__all__ = [
    "EpSet",
    "FilterOracle",
    "Hyper",
    "HyperFrac",
    "LogEntry",
    "PowerSum",
    "SeqExpr",
    "Strategy",
    "check_filter_axioms",
    "cod",
    "dom",
    "exists_witness",
    "frac_add",
    "frac_div",
    "frac_eq",
    "frac_member",
    "frac_member_naturals",
    "frac_mul",
    "frac_st",
    "frac_sub",
    "hyper_add",
    "hyper_eq",
    "hyper_le",
    "hyper_lt",
    "hyper_mul",
    "hyper_neg",
    "hyper_sign",
    "is_infinite_frac",
    "is_infinitesimal_hyper",
    "pair_set",
    "parse_epset",
    "parse_log",
    "pseudo_distance_hyper",
    "replay",
    "st_hyper",
    "star_apply_poly",
    "star_member",
    "star_pair_member",
]
