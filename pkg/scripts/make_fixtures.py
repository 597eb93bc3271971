#!/usr/bin/env python3
"""Regenerate the committed test fixtures and golden files.

Run from the repository root:

    python3 scripts/make_fixtures.py

Outputs are deterministic; a diff after running means the engine's
observable behavior changed and the goldens need a deliberate refresh.
"""
from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from capflow import allocator, store, synth
from capflow.ballots import Ballot
from capflow.intake import CHECKLIST_ITEMS, ConformityChecklist, Proposal, ProposalForm, SeatProfile
from capflow.model import Organization, SemesterConfig, Student
from capflow.state import Semester
from capflow.workflow import Phase

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"
GOLDENS = ROOT / "tests" / "goldens"


def _approved(pid: str, areas: set[str], org_id: str, seats: list[set[str]]) -> Proposal:
    return Proposal(
        id=pid,
        form=ProposalForm(
            title=f"Project {pid}",
            description=f"Fixture project {pid}",
            deliverables="Prototype and report",
            areas=frozenset(areas),
            org_id=org_id,
        ),
        status="approved",
        checklist=ConformityChecklist(tuple([True] * len(CHECKLIST_ITEMS))),
        seat_profile=SeatProfile(tuple(frozenset(s) for s in seats)),
    )


def instance_6x2() -> Semester:
    """Two projects, six students, three per group on first choices.

    The objective terms on this instance are hand-checkable: rank 0,
    size 2, interest 2.5, seat 0, gpa spread 7/60, total 337/30.
    """
    config = replace(SemesterConfig(), min_ballot_choices=2)
    orgs = {
        "o1": Organization("o1", "Helix Labs", "company"),
        "o2": Organization("o2", "Vertex Robotics", "tech_org"),
    }
    proposals = {
        "pa": _approved("pa", {"data_science", "cloud_computing"}, "o1",
                        [{"EC"}, {"EC", "CS"}, {"EX", "EM"}, {"EC", "EX", "EM", "CS"}]),
        "pb": _approved("pb", {"robotics"}, "o2",
                        [{"EM"}, {"EM", "EX"}, {"EC", "EX", "EM", "CS"}]),
    }
    students = {
        "a1": Student("a1", "Ana Lima", "EC", 8.0, frozenset({"data_science"})),
        "a2": Student("a2", "Bruno Costa", "CS", 6.0, frozenset({"data_science", "cloud_computing"})),
        "a3": Student("a3", "Carla Dias", "EX", 7.0, frozenset({"robotics"})),
        "a4": Student("a4", "Diego Gomes", "EM", 9.0, frozenset({"robotics", "advanced_manufacturing"})),
        "a5": Student("a5", "Elisa Nunes", "EM", 5.0, frozenset({"cloud_computing"})),
        "a6": Student("a6", "Fabio Melo", "CS", 10.0, frozenset({"interactive_systems"})),
    }
    stamp = "2026-03-02T09:00:00+00:00"
    ballots = {
        "a1": Ballot("a1", ("pa", "pb"), stamp),
        "a2": Ballot("a2", ("pa", "pb"), stamp),
        "a3": Ballot("a3", ("pb", "pa"), stamp),
        "a4": Ballot("a4", ("pb", "pa"), stamp),
        "a5": Ballot("a5", ("pa", "pb"), stamp),
        "a6": Ballot("a6", ("pb", "pa"), stamp),
    }
    return Semester(
        config=config,
        organizations=orgs,
        students=students,
        proposals=proposals,
        ballots=ballots,
        phase=Phase.allocation,
        version=1,
    )


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    GOLDENS.mkdir(parents=True, exist_ok=True)

    store.save(instance_6x2(), FIXTURES / "instance_6x2.json")

    twelve = synth.make_semester(12, 12, 4, phase=Phase.allocation, conflict_rate=0.3)
    store.save(twelve, FIXTURES / "semester_12x4.json")

    allocation = allocator.allocate(twelve.instance(), twelve.config)
    (GOLDENS / "allocate_stdout_12x4.json").write_text(
        store.canonical_json(store.allocation_to_dict(allocation)), encoding="utf-8"
    )
    allocated = synth.make_semester(12, 12, 4, phase=Phase.allocation, conflict_rate=0.3)
    allocated.allocation = allocation
    allocated.bump()
    store.save(allocated, FIXTURES / "semester_12x4_allocated.json")
    (GOLDENS / "allocation_export_12x4.json").write_text(
        store.export_allocation(allocated), encoding="utf-8"
    )

    hundred = synth.make_semester(100, 100, 30, phase=Phase.allocation)
    store.save(hundred, FIXTURES / "semester_100x30.json")

    for path in sorted(FIXTURES.glob("*.json")) + sorted(GOLDENS.glob("*.json")):
        print(f"wrote {path.relative_to(ROOT)}")


if __name__ == "__main__":
    main()
