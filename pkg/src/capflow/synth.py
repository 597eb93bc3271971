"""Seeded synthetic cohorts, proposals, and ballots for tests, benchmarks,
and the oracle gap study. Everything is a pure function of the seed.
"""
from __future__ import annotations

import random
from dataclasses import replace

from .allocator import Instance
from .ballots import Ballot
from .intake import ConformityChecklist, Proposal, ProposalForm, SeatProfile, CHECKLIST_ITEMS
from .model import INTEREST_AREAS, ExperienceEntry, Organization, SemesterConfig, Student
from .state import Semester
from .workflow import Phase

_FIRST = ("Ana", "Bruno", "Carla", "Diego", "Elisa", "Fabio", "Gina", "Hugo", "Iris", "Joao",
          "Kira", "Leo", "Mara", "Nina", "Otto", "Paula", "Quin", "Rosa", "Saul", "Tina")
_LAST = ("Almeida", "Barros", "Costa", "Dias", "Esteves", "Farias", "Gomes", "Hata",
         "Ibarra", "Jorge", "Katz", "Lima", "Melo", "Nunes", "Okada", "Pires")

_ORG_STEMS = ("Helix", "Vertex", "Nimbus", "Quanta", "Orbita", "Lumen", "Faro", "Delta",
              "Sigma", "Atlas", "Corte", "Monte", "Prisma", "Eixo", "Rumo", "Vale")
_ORG_SUFFIX = ("Labs", "Systems", "Motors", "Dynamics", "Tech", "Institute", "Energy", "Robotics")


def make_students(rng: random.Random, n: int, config: SemesterConfig) -> dict[str, Student]:
    areas = sorted(INTEREST_AREAS)
    programs = config.program_codes()
    students = {}
    for i in range(n):
        sid = f"s{i + 1:03d}"
        interests = frozenset(rng.sample(areas, rng.randint(1, 4)))
        students[sid] = Student(
            id=sid,
            name=f"{rng.choice(_FIRST)} {rng.choice(_LAST)}",
            program=rng.choice(programs),
            gpa=round(rng.uniform(0.5, 1.0) * config.gpa_scale_max, 2),
            interests=interests,
        )
    return students


def make_organizations(rng: random.Random, n: int) -> dict[str, Organization]:
    orgs = {}
    names = set()
    i = 0
    while len(orgs) < n:
        name = f"{rng.choice(_ORG_STEMS)} {rng.choice(_ORG_SUFFIX)}"
        if name in names:
            name = f"{name} {len(orgs) + 1}"
        names.add(name)
        i += 1
        oid = f"org{i:03d}"
        orgs[oid] = Organization(oid, name, rng.choice(("company", "research_center", "tech_org", "ngo")))
    return orgs


def make_proposals(
    rng: random.Random, n: int, orgs: dict[str, Organization], config: SemesterConfig
) -> dict[str, Proposal]:
    areas = sorted(INTEREST_AREAS)
    org_ids = sorted(orgs)
    proposals = {}
    for i in range(n):
        pid = f"p{i + 1:03d}"
        seat_count = rng.randint(max(1, config.team_size_min), config.team_size_max)
        seats = []
        for _ in range(seat_count):
            k = rng.randint(1, len(config.programs))
            seats.append(frozenset(rng.sample(config.program_codes(), k)))
        form = ProposalForm(
            title=f"Project {pid}",
            description=f"Synthetic challenge {pid}",
            deliverables="Prototype and validation report",
            areas=frozenset(rng.sample(areas, rng.randint(1, 3))),
            org_id=rng.choice(org_ids),
        )
        proposals[pid] = Proposal(
            id=pid,
            form=form,
            status="approved",
            checklist=ConformityChecklist(tuple([True] * len(CHECKLIST_ITEMS))),
            seat_profile=SeatProfile(tuple(seats)),
        )
    return proposals


def make_ballots(
    rng: random.Random,
    students: dict[str, Student],
    proposals: dict[str, Proposal],
    config: SemesterConfig,
    participation: float = 1.0,
) -> dict[str, Ballot]:
    pids = sorted(proposals)
    ballots = {}
    for sid in sorted(students):
        if rng.random() > participation:
            continue
        length = rng.randint(min(config.min_ballot_choices, len(pids)), len(pids))
        choices = rng.sample(pids, length)
        ballots[sid] = Ballot(sid, tuple(choices), "2026-02-01T12:00:00+00:00")
    return ballots


def make_instance(
    seed: int,
    n_students: int,
    n_proposals: int,
    config: SemesterConfig | None = None,
    participation: float = 1.0,
) -> tuple[Instance, SemesterConfig]:
    """A self-consistent allocator instance; the config is adjusted so the
    ballot minimum never exceeds the proposal count."""
    rng = random.Random(seed)
    config = config or SemesterConfig()
    if config.min_ballot_choices > n_proposals:
        config = replace(config, min_ballot_choices=max(1, min(3, n_proposals)))
    students = make_students(rng, n_students, config)
    orgs = make_organizations(rng, max(2, n_proposals // 2))
    proposals = make_proposals(rng, n_proposals, orgs, config)
    ballots = make_ballots(rng, students, proposals, config, participation)
    return Instance(students=students, proposals=proposals, ballots=ballots, organizations=orgs), config


def make_semester(
    seed: int,
    n_students: int,
    n_proposals: int,
    phase: Phase = Phase.allocation,
    config: SemesterConfig | None = None,
    conflict_rate: float = 0.0,
) -> Semester:
    """A full semester snapshot in the given phase, ballots included."""
    instance, config = make_instance(seed, n_students, n_proposals, config)
    rng = random.Random(seed + 1)
    students = dict(instance.students)
    if conflict_rate > 0:
        org_names = [o.name for o in instance.organizations.values()]
        for sid in sorted(students):
            if rng.random() < conflict_rate:
                kind = rng.choice(("work_current", "work_past", "family"))
                org_name = rng.choice(org_names)
                s = students[sid]
                if kind == "work_current":
                    students[sid] = replace(
                        s, work_history=s.work_history + (ExperienceEntry(org_name, "internship", "current"),)
                    )
                elif kind == "work_past":
                    students[sid] = replace(
                        s, work_history=s.work_history + (ExperienceEntry(org_name, "job", "past"),)
                    )
                else:
                    students[sid] = replace(s, family_ties=s.family_ties + (org_name,))
    return Semester(
        config=config,
        organizations=dict(instance.organizations),
        students=students,
        proposals=dict(instance.proposals),
        ballots=dict(instance.ballots),
        phase=phase,
        version=1,
    )
