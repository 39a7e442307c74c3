# dispatch.py

"""
Top-level 2-closure: run every branch, verify, keep the largest, and let the oracle arbitrate
at small degree.
"""

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .affine import AffineFrame, detect_affine
from .aut import oracle_two_closure
from .errors import ClosureError, NotRankThreeError
from .groupio import format_group
from .nonaffine import run_nonaffine
from .orbitals import OrbitalStructure, two_orbits
from .outcome import BranchOutcome, candidate_is_sound, largest, same_group
from .perm import PermutationGroup
from .qform import run_qform
from .settings import Settings, get_settings
from .small import run_small
from .tensor import run_tensor

logger = logging.getLogger(__name__)

__all__ = ["ClosureReport", "same_group", "two_closure", "verify_candidate"]

ORACLE_MODES = ("on", "off", "auto")


@dataclass
class ClosureReport:
    """Everything two_closure found out about one input group."""

    degree: int
    rank: int
    subdegrees: list[int]
    digest: str
    branches: dict[str, BranchOutcome] = field(default_factory=dict)
    chosen: Optional[str] = None
    group: Optional[PermutationGroup] = None
    verified: bool = False
    oracle_order: Optional[int] = None
    notes: list[str] = field(default_factory=list)

    @property
    def resolved(self) -> bool:
        return self.group is not None

    @property
    def order(self) -> Optional[int]:
        return None if self.group is None else self.group.order

    def to_json(self) -> dict[str, Any]:
        """JSON-ready dict; orders are decimal strings."""
        branches = {}
        for name, outcome in self.branches.items():
            entry: dict[str, Any] = {"status": "success" if outcome.succeeded else "failure"}
            if outcome.succeeded:
                entry["order"] = str(outcome.order)
            else:
                entry["reason"] = outcome.reason
            if outcome.notes:
                entry["notes"] = list(outcome.notes)
            if outcome.flags:
                entry["flags"] = dict(outcome.flags)
            branches[name] = entry
        out: dict[str, Any] = {
            "degree": self.degree,
            "rank": self.rank,
            "subdegrees": list(self.subdegrees),
            "branches": branches,
            "chosen": self.chosen,
            "order": None if self.order is None else str(self.order),
            "generators": [] if self.group is None else [list(g.images) for g in self.group.generators],
            "verified": self.verified,
            "digest": self.digest,
            "notes": list(self.notes),
        }
        if self.oracle_order is not None:
            out["oracle_order"] = str(self.oracle_order)
        return out


def verify_candidate(
    group: PermutationGroup, candidate: PermutationGroup, structure: Optional[OrbitalStructure] = None
) -> bool:
    """True iff the candidate contains the group and preserves each of its 2-orbits."""
    if group.degree != candidate.degree:
        return False
    return candidate_is_sound(group, candidate, structure)


def digest(group: PermutationGroup) -> str:
    return hashlib.sha256(format_group(group).encode("utf-8")).hexdigest()


def _run_branch(
    name: str,
    runner: Callable[..., BranchOutcome],
    group: PermutationGroup,
    structure: OrbitalStructure,
    settings: Settings,
    **kwargs: Any,
) -> BranchOutcome:
    logger.info(f"Running branch {name}")
    try:
        return runner(group, structure, settings, **kwargs)
    except ClosureError as e:
        return BranchOutcome.failure(name, f"{type(e).__name__}: {e}")


def two_closure(
    group: PermutationGroup,
    oracle: str = "auto",
    threshold: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> ClosureReport:
    """
    Compute the 2-closure of a transitive rank 3 group.

    Args:
        group (PermutationGroup): The input group
        oracle (str): "on" always runs the automorphism search, "off" never does, "auto" runs it
            when the degree is at most the threshold
        threshold (Optional[int]): Degree threshold for "auto"; defaults to ``oracle_cap``
        settings (Optional[Settings]): Caps

    Returns:
        ClosureReport: The report; ``group`` is None when nothing verified could be produced

    Raises:
        NotRankThreeError: If the group is not transitive of rank 3
        ValueError: If the oracle mode is unknown
    """
    if oracle not in ORACLE_MODES:
        raise ValueError(f"oracle mode must be one of {ORACLE_MODES}, got {oracle!r}")
    settings = settings or get_settings()
    threshold = settings.oracle_cap if threshold is None else threshold
    structure = two_orbits(group, settings)
    ok, _ = structure.is_rank3()
    if not ok:
        raise NotRankThreeError(structure.rank, structure.transitive)

    report = ClosureReport(group.degree, structure.rank, list(structure.subdegrees), digest(group))
    frame: Optional[AffineFrame] = None
    try:
        frame = detect_affine(group, settings)
    except ClosureError as e:
        report.notes.append(f"affine detection failed: {e}")

    report.branches["nonaffine"] = _run_branch("nonaffine", run_nonaffine, group, structure, settings)
    for name, runner in (("small", run_small), ("tensor", run_tensor), ("qform", run_qform)):
        if frame is None:
            report.branches[name] = BranchOutcome.failure(name, "not affine")
            continue
        report.branches[name] = _run_branch(name, runner, group, structure, settings, frame=frame)

    candidates = []
    for name, outcome in report.branches.items():
        if not outcome.succeeded:
            continue
        if verify_candidate(group, outcome.group, structure):
            candidates.append(outcome)
        else:
            report.notes.append(f"{name} output failed verification and was discarded")
    best = largest(candidates, report.notes)

    oracle_group: Optional[PermutationGroup] = None
    if oracle == "on" or (oracle == "auto" and group.degree <= threshold):
        try:
            oracle_group = oracle_two_closure(group, settings)
            report.oracle_order = oracle_group.order
        except ClosureError as e:
            report.notes.append(f"oracle unavailable: {e}")

    if oracle_group is not None:
        if best is not None and best.order > oracle_group.order:
            message = f"{best.branch} gives order {best.order} above the oracle's {oracle_group.order}"
            logger.error(message)
            report.notes.append(message)
        if best is not None and best.order == oracle_group.order:
            if not same_group(best.group, oracle_group):
                report.notes.append(f"{best.branch} and the oracle give different groups")
            report.chosen, report.group = best.branch, best.group
        else:
            if best is not None and best.order < oracle_group.order:
                report.notes.append(f"largest branch order {best.order} is below the oracle's")
            report.chosen, report.group = "oracle", oracle_group
    elif best is not None:
        report.chosen, report.group = best.branch, best.group

    if report.group is not None:
        report.verified = verify_candidate(group, report.group, structure)
        logger.info(f"2-closure of order {report.order} from {report.chosen}")
    else:
        logger.warning("No branch produced a verified closure; the result is unresolved")
    return report
