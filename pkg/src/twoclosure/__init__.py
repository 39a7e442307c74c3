"""
2-closures of rank 3 permutation groups.
"""

from .dispatch import ClosureReport, same_group, two_closure, verify_candidate
from .errors import ClosureError, GroupParseError, NotRankThreeError
from .groupio import format_group, parse_group, read_group
from .perm import Permutation, PermutationGroup
from .settings import Settings, get_settings

__version__ = "0.1.0"

__all__ = [
    "ClosureError",
    "ClosureReport",
    "GroupParseError",
    "NotRankThreeError",
    "Permutation",
    "PermutationGroup",
    "Settings",
    "format_group",
    "get_settings",
    "parse_group",
    "read_group",
    "same_group",
    "two_closure",
    "verify_candidate",
]
