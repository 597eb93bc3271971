"""Advisor assignment: exactly one faculty advisor per finalized group,
under per-advisor load limits.

The policy is a transparent greedy: groups in proposal-id order, each
going to the advisor with the lightest current load, breaking ties by
interest-area overlap with the proposal (Jaccard), then by advisor id.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import CapacityError, InvalidInput, NotFound
from .intake import Proposal
from .model import jaccard


@dataclass(frozen=True)
class Advisor:
    id: str
    name: str
    max_load: int = 2
    area_prefs: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.max_load < 1:
            raise InvalidInput(f"advisor {self.id!r} max_load must be at least 1", advisor_id=self.id)


def assign_advisors(
    group_ids: Iterable[str],
    advisors: Mapping[str, Advisor],
    proposals: Mapping[str, Proposal],
) -> dict[str, str]:
    """Assign every group one advisor without exceeding any max_load."""
    groups = sorted(group_ids)
    capacity = sum(a.max_load for a in advisors.values())
    if capacity < len(groups):
        raise CapacityError(
            f"advisor capacity {capacity} below {len(groups)} groups",
            capacity=capacity,
            groups=len(groups),
            shortfall=len(groups) - capacity,
        )
    load: dict[str, int] = {aid: 0 for aid in advisors}
    assignment: dict[str, str] = {}
    for pid in groups:
        areas = proposals[pid].form.areas if pid in proposals else frozenset()
        eligible = [a for a in advisors.values() if load[a.id] < a.max_load]
        best = min(eligible, key=lambda a: (load[a.id], -jaccard(a.area_prefs, areas), a.id))
        assignment[pid] = best.id
        load[best.id] += 1
    return assignment


def reassign_advisor(
    assignment: Mapping[str, str],
    group_id: str,
    advisor_id: str,
    advisors: Mapping[str, Advisor],
) -> dict[str, str]:
    """Move one group to another advisor; a no-op when already assigned."""
    if group_id not in assignment:
        raise NotFound(f"unknown group {group_id!r}", group_id=group_id)
    if advisor_id not in advisors:
        raise NotFound(f"unknown advisor {advisor_id!r}", advisor_id=advisor_id)
    if assignment[group_id] == advisor_id:
        return dict(assignment)
    new_load = sum(1 for aid in assignment.values() if aid == advisor_id) + 1
    if new_load > advisors[advisor_id].max_load:
        raise CapacityError(
            f"advisor {advisor_id!r} would exceed max_load {advisors[advisor_id].max_load}",
            advisor_id=advisor_id,
            max_load=advisors[advisor_id].max_load,
        )
    updated = dict(assignment)
    updated[group_id] = advisor_id
    return updated
