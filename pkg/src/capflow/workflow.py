"""Semester phase machine: the ordered timeline every mutation is gated by.

Phases advance only to their immediate successor; an admin may abort any
semester straight to ``closed``. The day-offset schedule is advisory (the
UI surfaces it); transitions are admin-triggered, never clock-triggered.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

from .errors import InvalidInput, LifecycleError, NotFound, PhaseError

if TYPE_CHECKING:
    from .state import Semester


class Phase(str, Enum):
    interest_collection = "interest_collection"
    sourcing = "sourcing"
    conformity_review = "conformity_review"
    catalog_published = "catalog_published"
    ballot_window = "ballot_window"
    allocation = "allocation"
    advisor_assignment = "advisor_assignment"
    execution = "execution"
    midterm_review = "midterm_review"
    final_review = "final_review"
    executive_presentation = "executive_presentation"
    surveys_open = "surveys_open"
    closed = "closed"


PHASE_ORDER: tuple[Phase, ...] = tuple(Phase)

# Advisory day offsets from semester day 0. The ballot window spans two
# weeks; execution spans 135 days (four and a half months).
DEFAULT_SCHEDULE_OFFSETS: dict[Phase, int] = {
    Phase.interest_collection: 0,
    Phase.sourcing: 14,
    Phase.conformity_review: 45,
    Phase.catalog_published: 60,
    Phase.ballot_window: 62,
    Phase.allocation: 76,
    Phase.advisor_assignment: 80,
    Phase.execution: 83,
    Phase.midterm_review: 150,
    Phase.final_review: 218,
    Phase.executive_presentation: 223,
    Phase.surveys_open: 225,
    Phase.closed: 240,
}


@dataclass(frozen=True)
class PhaseSchedule:
    """Start day-offset per phase; offsets must be nondecreasing in phase order."""

    offsets: dict[Phase, int] = field(default_factory=lambda: dict(DEFAULT_SCHEDULE_OFFSETS))

    def __post_init__(self) -> None:
        missing = [p.value for p in PHASE_ORDER if p not in self.offsets]
        if missing:
            raise InvalidInput(f"schedule missing phases {missing}", phases=missing)
        days = [self.offsets[p] for p in PHASE_ORDER]
        if any(b < a for a, b in zip(days, days[1:])):
            raise InvalidInput("schedule offsets must be nondecreasing in phase order")


def successor(phase: Phase) -> Phase | None:
    idx = PHASE_ORDER.index(phase)
    if idx + 1 < len(PHASE_ORDER):
        return PHASE_ORDER[idx + 1]
    return None


# Mutating operations and the phases that admit them. Reads are always
# allowed and are not listed.
_GATES: dict[str, frozenset[Phase]] = {
    "register_student": frozenset({Phase.interest_collection}),
    "update_student": frozenset({Phase.interest_collection, Phase.sourcing}),
    "submit_proposal": frozenset({Phase.sourcing}),
    "review_conformity": frozenset({Phase.sourcing, Phase.conformity_review}),
    "set_seat_profile": frozenset({Phase.sourcing, Phase.conformity_review}),
    "reject_proposal": frozenset({Phase.sourcing, Phase.conformity_review}),
    "withdraw_proposal": frozenset(p for p in PHASE_ORDER if p != Phase.closed),
    "submit_ballot": frozenset({Phase.ballot_window}),
    "allocate": frozenset({Phase.allocation}),
    "what_if_move": frozenset({Phase.allocation}),
    "apply_move": frozenset({Phase.allocation}),
    "waive_conflict": frozenset({Phase.allocation}),
    "finalize": frozenset({Phase.allocation}),
    "assign_advisors": frozenset({Phase.advisor_assignment}),
    "reassign_advisor": frozenset({Phase.advisor_assignment}),
    "record_survey": frozenset({Phase.execution, Phase.surveys_open}),
    "advance": frozenset(PHASE_ORDER),
}

GATED_ACTIONS: tuple[str, ...] = tuple(sorted(_GATES))

READ_ACTIONS: tuple[str, ...] = (
    "get_state",
    "balance",
    "demand",
    "get_allocation",
    "surveys_summary",
)


def gate(action: str, phase: Phase) -> bool:
    """Static allow/deny table for (operation, phase); total over known actions."""
    if action in READ_ACTIONS:
        return True
    try:
        return phase in _GATES[action]
    except KeyError:
        raise NotFound(f"unknown action {action!r}", action=action) from None


def require_gate(action: str, phase: Phase) -> None:
    if not gate(action, phase):
        raise PhaseError(
            f"action {action!r} is not allowed during phase {phase.value!r}",
            action=action,
            phase=phase.value,
        )


def advance(state: "Semester", target: Phase) -> "Semester":
    """Move the semester to ``target``: the immediate successor, or closed."""
    current = state.phase
    if target == current:
        raise LifecycleError(f"semester already in phase {target.value!r}", phase=target.value)
    if target != Phase.closed and target != successor(current):
        raise LifecycleError(
            f"cannot advance from {current.value!r} to {target.value!r}",
            current=current.value,
            target=target.value,
        )
    state.phase = target
    state.bump()
    return state
