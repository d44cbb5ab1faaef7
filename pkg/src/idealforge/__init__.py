"""Posets and finite topologies with a prescribed number of order ideals."""

from .construct import Construction, construct_best, construct_min_neighborhood
from .ideals import count_antichains, count_ideals, count_ideals_bruteforce
from .poset import Poset, PosetError, format_poset, parse_poset

__version__ = "0.1.0"

__all__ = [
    "Construction",
    "Poset",
    "PosetError",
    "construct_best",
    "construct_min_neighborhood",
    "count_antichains",
    "count_ideals",
    "count_ideals_bruteforce",
    "format_poset",
    "parse_poset",
]
