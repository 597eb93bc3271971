"""Intake: student registration, proposal submission, conformity review,
and faculty-set seat profiles.

Proposal lifecycle graph::

    submitted -> under_review -> {approved, revision_requested, rejected}
    revision_requested -> under_review
    any -> withdrawn

A proposal is approved, and visible in the student catalog, only once the
committee checklist has all ten items true AND a seat profile is on file.
Seat profiles are a guideline: they never block a student's ballot, only
the allocator's scoring.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

from .errors import DuplicateId, InvalidInput, LifecycleError, NotFound
from .model import INTEREST_AREAS, Student, validate_student

if TYPE_CHECKING:
    from .state import Semester

# Committee review items, in form order.
CHECKLIST_ITEMS: tuple[str, ...] = (
    "prior_knowledge",
    "systematic_design_process",
    "real_world_request",
    "technical_standards",
    "realistic_constraints",
    "experimentation_hands_on",
    "multi_program_teamwork",
    "one_semester_complexity",
    "member_hours_360",
    "concrete_measurable_goals",
)


@dataclass(frozen=True)
class ConformityChecklist:
    items: tuple[bool, ...]
    notes: str = ""

    def __post_init__(self) -> None:
        if len(self.items) != len(CHECKLIST_ITEMS):
            raise InvalidInput(
                f"checklist must have exactly {len(CHECKLIST_ITEMS)} items, got {len(self.items)}",
                expected=len(CHECKLIST_ITEMS),
                got=len(self.items),
            )

    @property
    def all_pass(self) -> bool:
        return all(self.items)

    def failed_items(self) -> tuple[str, ...]:
        return tuple(name for name, ok in zip(CHECKLIST_ITEMS, self.items) if not ok)


@dataclass(frozen=True)
class SeatProfile:
    """Per-vacancy sets of programs a seat should ideally be filled from."""

    seats: tuple[frozenset[str], ...]

    def __post_init__(self) -> None:
        if not self.seats:
            raise InvalidInput("seat profile needs at least one seat")
        for i, allowed in enumerate(self.seats):
            if not allowed:
                raise InvalidInput(f"seat {i + 1} allows no programs", seat=i + 1)

    def __len__(self) -> int:
        return len(self.seats)


@dataclass(frozen=True)
class ProposalForm:
    title: str
    description: str
    deliverables: str
    areas: frozenset[str]
    org_id: str
    resources: str | None = None
    observations: str | None = None


PROPOSAL_STATUSES = (
    "submitted",
    "under_review",
    "revision_requested",
    "approved",
    "rejected",
    "withdrawn",
)

_LIFECYCLE: dict[str, frozenset[str]] = {
    "submitted": frozenset({"under_review", "withdrawn"}),
    "under_review": frozenset({"approved", "revision_requested", "rejected", "withdrawn"}),
    "revision_requested": frozenset({"under_review", "withdrawn"}),
    "approved": frozenset({"withdrawn"}),
    "rejected": frozenset({"withdrawn"}),
    "withdrawn": frozenset(),
}


@dataclass(frozen=True)
class Proposal:
    id: str
    form: ProposalForm
    status: str = "submitted"
    checklist: ConformityChecklist | None = None
    seat_profile: SeatProfile | None = None
    review_notes: str = ""

    def transition(self, new_status: str) -> "Proposal":
        if new_status not in _LIFECYCLE[self.status]:
            raise LifecycleError(
                f"proposal {self.id} cannot go from {self.status!r} to {new_status!r}",
                proposal_id=self.id,
                status=self.status,
                target=new_status,
            )
        return replace(self, status=new_status)


def register_student(semester: "Semester", record: Student) -> str:
    """Store a new student; interests may be filled in later via update."""
    validate_student(record, semester.config)
    if record.id in semester.students:
        raise DuplicateId(f"student {record.id!r} already registered", student_id=record.id)
    semester.students[record.id] = record
    semester.bump()
    return record.id


def update_student(semester: "Semester", student_id: str, patch: dict) -> Student:
    from .model import patch_student

    if student_id not in semester.students:
        raise NotFound(f"unknown student {student_id!r}", student_id=student_id)
    updated = patch_student(semester.students[student_id], patch, semester.config)
    semester.students[student_id] = updated
    semester.bump()
    return updated


def _validate_form(semester: "Semester", form: ProposalForm) -> None:
    if form.org_id not in semester.organizations:
        raise NotFound(f"unknown organization {form.org_id!r}", org_id=form.org_id)
    missing = [
        name
        for name, value in (("title", form.title), ("description", form.description), ("deliverables", form.deliverables))
        if not value.strip()
    ]
    if missing:
        raise InvalidInput(f"required fields empty: {missing}", fields=missing)
    if not form.areas:
        raise InvalidInput("proposal must name at least one interest area")
    unknown = set(form.areas) - set(INTEREST_AREAS)
    if unknown:
        raise InvalidInput(f"unknown interest areas {sorted(unknown)}", areas=sorted(unknown))


def submit_proposal(semester: "Semester", form: ProposalForm, proposal_id: str | None = None) -> str:
    _validate_form(semester, form)
    pid = proposal_id or semester.next_proposal_id()
    if pid in semester.proposals:
        raise DuplicateId(f"proposal {pid!r} already exists", proposal_id=pid)
    semester.proposals[pid] = Proposal(id=pid, form=form)
    semester.bump()
    return pid


def _get_proposal(semester: "Semester", proposal_id: str) -> Proposal:
    try:
        return semester.proposals[proposal_id]
    except KeyError:
        raise NotFound(f"unknown proposal {proposal_id!r}", proposal_id=proposal_id) from None


def _maybe_approve(proposal: Proposal) -> Proposal:
    # Approval requires the conjunction: all ten items pass and a profile is set.
    if (
        proposal.status == "under_review"
        and proposal.checklist is not None
        and proposal.checklist.all_pass
        and proposal.seat_profile is not None
    ):
        return proposal.transition("approved")
    return proposal


def review_conformity(
    semester: "Semester",
    proposal_id: str,
    checklist: ConformityChecklist,
    decision_notes: str = "",
) -> Proposal:
    """Record the committee's ten-item review.

    A fully passing checklist approves the proposal once a seat profile is
    on file (until then it stays under review with the passing checklist
    stored); any failed item sends it back for revision. Revised proposals
    are re-reviewed against the full checklist.
    """
    proposal = _get_proposal(semester, proposal_id)
    if proposal.status not in ("submitted", "under_review", "revision_requested"):
        raise LifecycleError(
            f"proposal {proposal_id} is {proposal.status!r}; review needs submitted/under_review/revision_requested",
            proposal_id=proposal_id,
            status=proposal.status,
        )
    if proposal.status != "under_review":
        proposal = proposal.transition("under_review")
    proposal = replace(proposal, checklist=checklist, review_notes=decision_notes)
    if checklist.all_pass:
        proposal = _maybe_approve(proposal)
    else:
        proposal = proposal.transition("revision_requested")
    semester.proposals[proposal_id] = proposal
    semester.bump()
    return proposal


def set_seat_profile(semester: "Semester", proposal_id: str, profile: SeatProfile) -> Proposal:
    """Record the faculty-set per-seat program profile."""
    config = semester.config
    proposal = _get_proposal(semester, proposal_id)
    if proposal.status in ("rejected", "withdrawn"):
        raise LifecycleError(
            f"proposal {proposal_id} is {proposal.status!r}; seat profile not editable",
            proposal_id=proposal_id,
            status=proposal.status,
        )
    if len(profile) > config.team_size_max:
        raise InvalidInput(
            f"profile has {len(profile)} seats; team_size_max is {config.team_size_max}",
            seats=len(profile),
            team_size_max=config.team_size_max,
        )
    for i, allowed in enumerate(profile.seats):
        unknown = set(allowed) - set(config.program_codes())
        if unknown:
            raise InvalidInput(f"seat {i + 1} allows unknown programs {sorted(unknown)}", seat=i + 1)
    proposal = replace(proposal, seat_profile=profile)
    proposal = _maybe_approve(proposal)
    semester.proposals[proposal_id] = proposal
    semester.bump()
    return proposal


def reject_proposal(semester: "Semester", proposal_id: str, notes: str = "") -> Proposal:
    proposal = _get_proposal(semester, proposal_id)
    if proposal.status == "submitted":
        proposal = proposal.transition("under_review")
    proposal = proposal.transition("rejected")
    semester.proposals[proposal_id] = replace(proposal, review_notes=notes)
    semester.bump()
    return semester.proposals[proposal_id]


def withdraw_proposal(semester: "Semester", proposal_id: str) -> Proposal:
    proposal = _get_proposal(semester, proposal_id).transition("withdrawn")
    semester.proposals[proposal_id] = proposal
    semester.bump()
    return proposal


def catalog(semester: "Semester") -> list[Proposal]:
    """Proposals visible to students: approved only, in id order."""
    return [semester.proposals[pid] for pid in sorted(semester.proposals) if semester.proposals[pid].status == "approved"]
