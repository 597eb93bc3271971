"""Ranked project ballots, live demand statistics, and the student-to-
proposal interest alignment score used by the allocator.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from typing import TYPE_CHECKING, Iterable

from .errors import InvalidInput, NotFound
from .intake import Proposal
from .model import Student, jaccard
from .workflow import Phase, PhaseError

if TYPE_CHECKING:
    from .state import Semester


@dataclass(frozen=True)
class Ballot:
    student_id: str
    choices: tuple[str, ...]  # proposal ids, rank 1 first
    submitted_at: str  # ISO-8601 timestamp


@dataclass(frozen=True)
class DemandStat:
    proposal_id: str
    first_choice_count: int
    top3_count: int
    total_mentions: int


def submit_ballot(
    semester: "Semester",
    student_id: str,
    choices: Iterable[str],
    now: datetime | str | None = None,
) -> Ballot:
    """Validate and store a ballot; resubmission replaces the prior one."""
    if semester.phase != Phase.ballot_window:
        raise PhaseError(
            f"ballots are only accepted during the ballot window, not {semester.phase.value!r}",
            action="submit_ballot",
            phase=semester.phase.value,
        )
    if student_id not in semester.students:
        raise NotFound(f"unknown student {student_id!r}", student_id=student_id)
    choices = tuple(choices)
    minimum = semester.config.min_ballot_choices
    if len(choices) < minimum:
        raise InvalidInput(
            f"ballot lists {len(choices)} projects; at least {minimum} required",
            student_id=student_id,
            got=len(choices),
            minimum=minimum,
        )
    seen = set()
    for pid in choices:
        if pid in seen:
            raise InvalidInput(f"duplicate ballot entry {pid!r}", student_id=student_id, proposal_id=pid)
        seen.add(pid)
        proposal = semester.proposals.get(pid)
        if proposal is None or proposal.status != "approved":
            raise InvalidInput(
                f"ballot entry {pid!r} is not an approved proposal",
                student_id=student_id,
                proposal_id=pid,
            )
    if now is None:
        now = datetime.now(timezone.utc)
    stamp = now.isoformat() if isinstance(now, datetime) else str(now)
    ballot = Ballot(student_id=student_id, choices=choices, submitted_at=stamp)
    semester.ballots[student_id] = ballot
    semester.bump()
    return ballot


def demand_stats(ballots: Iterable[Ballot], proposal_ids: Iterable[str]) -> list[DemandStat]:
    """Per-proposal demand counters, one row per proposal in id order.

    Always recomputed from the ballots at hand; rows are zero for
    unmentioned proposals.
    """
    first: dict[str, int] = {}
    top3: dict[str, int] = {}
    mentions: dict[str, int] = {}
    for ballot in ballots:
        for rank, pid in enumerate(ballot.choices):
            mentions[pid] = mentions.get(pid, 0) + 1
            if rank == 0:
                first[pid] = first.get(pid, 0) + 1
            if rank < 3:
                top3[pid] = top3.get(pid, 0) + 1
    return [
        DemandStat(pid, first.get(pid, 0), top3.get(pid, 0), mentions.get(pid, 0))
        for pid in sorted(proposal_ids)
    ]


def alignment_score(student: Student, proposal: Proposal) -> float:
    """Jaccard index of the student's interests and the proposal's areas.

    Free-text "other" interests are excluded: there is no canonical
    matching for them.
    """
    return jaccard(student.interests, proposal.form.areas)
