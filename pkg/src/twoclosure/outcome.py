# outcome.py

"""
Result type shared by the branch algorithms, and the soundness check every candidate must pass.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Optional

from .orbitals import OrbitalStructure, two_orbits
from .perm import PermutationGroup

logger = logging.getLogger(__name__)


@dataclass
class BranchOutcome:
    """What one branch produced: a group, or the reason it did not apply."""

    branch: str
    group: Optional[PermutationGroup] = None
    reason: Optional[str] = None
    notes: list[str] = field(default_factory=list)
    flags: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def success(
        cls, branch: str, group: PermutationGroup, notes: Optional[list[str]] = None, **flags: Any
    ) -> "BranchOutcome":
        return cls(branch, group, None, list(notes or []), dict(flags))

    @classmethod
    def failure(
        cls, branch: str, reason: str, notes: Optional[list[str]] = None, **flags: Any
    ) -> "BranchOutcome":
        logger.info(f"Branch {branch} failed: {reason}")
        return cls(branch, None, reason, list(notes or []), dict(flags))

    @property
    def succeeded(self) -> bool:
        return self.group is not None

    @property
    def order(self) -> Optional[int]:
        return None if self.group is None else self.group.order


def candidate_is_sound(
    group: PermutationGroup, candidate: PermutationGroup, structure: Optional[OrbitalStructure] = None
) -> bool:
    """
    True iff the candidate contains the group and preserves each of its 2-orbits.
    """
    if candidate.degree != group.degree:
        return False
    structure = structure or two_orbits(group)
    if not all(candidate.contains(g) for g in group.generators):
        logger.error("Candidate does not contain the input group")
        return False
    if not all(structure.preserves(h) for h in candidate.generators):
        logger.error("Candidate merges 2-orbits of the input group")
        return False
    return True


def same_group(h: PermutationGroup, k: PermutationGroup) -> bool:
    """Mutual generator membership."""
    if h.degree != k.degree or h.order != k.order:
        return False
    return all(k.contains(g) for g in h.generators) and all(h.contains(g) for g in k.generators)


def largest(outcomes: list[BranchOutcome], notes: list[str]) -> Optional[BranchOutcome]:
    """
    Successful outcome of largest order. Equal orders must be equal groups; a mismatch is noted.
    """
    best: Optional[BranchOutcome] = None
    for outcome in outcomes:
        if not outcome.succeeded:
            continue
        if best is None or outcome.order > best.order:
            best = outcome
        elif outcome.order == best.order and not same_group(outcome.group, best.group):
            message = f"{outcome.branch} and {best.branch} give different groups of order {best.order}"
            logger.warning(message)
            notes.append(message)
    return best
