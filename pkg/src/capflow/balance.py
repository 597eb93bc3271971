"""Demand/supply analytics: how many projects each program needs, how the
approved seat supply covers enrollment (1.0 = the 100% line), and which
interest areas lack proposals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .intake import Proposal
from .model import SemesterConfig, Student


@dataclass(frozen=True)
class ProgramBalance:
    enrolled_students: int
    necessary_projects: int
    supplied_seats: int
    coverage_ratio: float | None  # None when no students enrolled


@dataclass(frozen=True)
class BalanceReport:
    per_program: dict[str, ProgramBalance]
    total: ProgramBalance


@dataclass(frozen=True)
class SourcingGap:
    area: str
    student_interest_count: int
    proposal_count: int
    gap_flag: bool


def _necessary(count: int, team_size_max: int) -> int:
    return math.ceil(count / team_size_max)


def _report(enrolled: dict[str, int], supplied: dict[str, int], total_students: int, total_seats: int, config: SemesterConfig) -> BalanceReport:
    per_program = {}
    for code in config.program_codes():
        n = enrolled.get(code, 0)
        seats = supplied.get(code, 0)
        per_program[code] = ProgramBalance(
            enrolled_students=n,
            necessary_projects=_necessary(n, config.team_size_max),
            supplied_seats=seats,
            coverage_ratio=(seats / n) if n > 0 else None,
        )
    total = ProgramBalance(
        enrolled_students=total_students,
        necessary_projects=_necessary(total_students, config.team_size_max),
        supplied_seats=total_seats,
        coverage_ratio=(total_seats / total_students) if total_students > 0 else None,
    )
    return BalanceReport(per_program=per_program, total=total)


def required_projects(cohort: Iterable[Student], config: SemesterConfig) -> BalanceReport:
    """Ideal project counts per program: ceil(enrolled / team_size_max)."""
    enrolled: dict[str, int] = {}
    total = 0
    for s in cohort:
        enrolled[s.program] = enrolled.get(s.program, 0) + 1
        total += 1
    return _report(enrolled, {}, total, 0, config)


def coverage(proposals: Iterable[Proposal], cohort: Iterable[Student], config: SemesterConfig) -> BalanceReport:
    """Coverage of enrollment by approved seat supply.

    A seat counts toward every program it allows, so per-program seat sums
    can exceed the physical seat count; the total row counts each seat
    once. A ratio above 1.0 sits above the 100% line.
    """
    enrolled: dict[str, int] = {}
    total_students = 0
    for s in cohort:
        enrolled[s.program] = enrolled.get(s.program, 0) + 1
        total_students += 1
    supplied: dict[str, int] = {}
    total_seats = 0
    for proposal in proposals:
        if proposal.status != "approved" or proposal.seat_profile is None:
            continue
        for allowed in proposal.seat_profile.seats:
            total_seats += 1
            for code in allowed:
                supplied[code] = supplied.get(code, 0) + 1
    return _report(enrolled, supplied, total_students, total_seats, config)


def sourcing_gaps(cohort: Iterable[Student], proposals: Iterable[Proposal]) -> list[SourcingGap]:
    """Interest areas ranked by student demand, flagging those without any
    proposal in the pipeline (rejected/withdrawn proposals do not count).
    """
    interest: dict[str, int] = {}
    for s in cohort:
        for area in s.interests:
            interest[area] = interest.get(area, 0) + 1
    supply: dict[str, int] = {}
    for p in proposals:
        if p.status in ("rejected", "withdrawn"):
            continue
        for area in p.form.areas:
            supply[area] = supply.get(area, 0) + 1
    areas = sorted(set(interest) | set(supply))
    rows = [
        SourcingGap(
            area=area,
            student_interest_count=interest.get(area, 0),
            proposal_count=supply.get(area, 0),
            gap_flag=interest.get(area, 0) > 0 and supply.get(area, 0) == 0,
        )
        for area in areas
    ]
    rows.sort(key=lambda r: (-r.student_interest_count, r.area))
    return rows
