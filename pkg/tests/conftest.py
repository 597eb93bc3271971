from __future__ import annotations

from pathlib import Path

import pytest

from capflow import store
from capflow.intake import CHECKLIST_ITEMS, ConformityChecklist, Proposal, ProposalForm, SeatProfile
from capflow.model import Organization, SemesterConfig, Student
from capflow.state import Semester
from capflow.workflow import Phase

FIXTURES = Path(__file__).parent / "fixtures"
GOLDENS = Path(__file__).parent / "goldens"


def make_student(sid: str, program: str = "EC", gpa: float = 7.0, interests: set[str] = frozenset(), **kw) -> Student:
    return Student(id=sid, name=f"Student {sid}", program=program, gpa=gpa, interests=frozenset(interests), **kw)


def approved_proposal(
    pid: str,
    areas: set[str] = frozenset({"robotics"}),
    org_id: str = "o1",
    seats: list[set[str]] | None = None,
) -> Proposal:
    if seats is None:
        seats = [{"EC", "EX", "EM", "CS"}] * 4
    return Proposal(
        id=pid,
        form=ProposalForm(
            title=f"Project {pid}",
            description="desc",
            deliverables="things",
            areas=frozenset(areas),
            org_id=org_id,
        ),
        status="approved",
        checklist=ConformityChecklist(tuple([True] * len(CHECKLIST_ITEMS))),
        seat_profile=SeatProfile(tuple(frozenset(s) for s in seats)),
    )


def base_semester(phase: Phase = Phase.interest_collection, **config_kw) -> Semester:
    return Semester(
        config=SemesterConfig(**config_kw),
        organizations={"o1": Organization("o1", "Helix Labs")},
        phase=phase,
        version=1,
    )


@pytest.fixture
def config() -> SemesterConfig:
    return SemesterConfig()


@pytest.fixture
def semester_6x2() -> Semester:
    return store.load(FIXTURES / "instance_6x2.json")


@pytest.fixture
def semester_12x4() -> Semester:
    return store.load(FIXTURES / "semester_12x4.json")


@pytest.fixture
def semester_12x4_allocated() -> Semester:
    return store.load(FIXTURES / "semester_12x4_allocated.json")


@pytest.fixture
def semester_100x30() -> Semester:
    return store.load(FIXTURES / "semester_100x30.json")
