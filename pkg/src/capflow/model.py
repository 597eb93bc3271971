"""Shared domain types: programs, interest areas, students, organizations,
and the semester configuration every other module reads.

All types here are immutable values and safe to share between threads.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable

from .errors import InvalidInput

# The predefined interest areas students tick at registration. Free-text
# "other" interests live on the student record, never in this table.
INTEREST_AREAS: dict[str, str] = {
    "computational_simulation": "Computational Simulation",
    "industrial_automation": "Industrial Automation",
    "embedded_systems": "Embedded Systems",
    "data_science": "Data Science",
    "social_innovation": "Social Innovation",
    "interactive_systems": "Interactive Systems",
    "information_systems": "Information Systems",
    "bioengineering": "Bioengineering",
    "mobility_engineering": "Mobility Engineering",
    "dynamic_systems_control": "Dynamic Systems Control",
    "advanced_manufacturing": "Advanced Manufacturing",
    "admin_economics_finance": "Administration, Economics, and Finance",
    "energy_efficiency": "Energy Efficiency",
    "robotics": "Robotics",
    "cloud_computing": "Cloud Computing",
}


@dataclass(frozen=True)
class Program:
    """An academic program eligible for capstone seats."""

    code: str
    label: str = ""


DEFAULT_PROGRAMS: tuple[Program, ...] = (
    Program("EC", "Computer Engineering"),
    Program("EX", "Mechatronics Engineering"),
    Program("EM", "Mechanical Engineering"),
    Program("CS", "Computer Science"),
)


@dataclass(frozen=True)
class WeightSet:
    """Weights of the allocation objective terms.

    ``unlisted_rank_penalty`` is charged per student assigned to a project
    absent from their ballot, and per unassigned student. It exceeds the
    worst listed rank cost for ballots of up to 11 choices; retune it if
    ballots grow past that.
    """

    w_rank: float = 1.0
    w_size: float = 3.0
    w_gpa: float = 2.0
    w_interest: float = 2.0
    w_seat: float = 5.0
    unlisted_rank_penalty: float = 10.0


@dataclass(frozen=True)
class SemesterConfig:
    """Cohort-level parameters; defaults follow the documented process."""

    team_size_max: int = 4
    team_size_min: int = 3
    min_ballot_choices: int = 5
    weekly_hours: int = 24
    total_hours: int = 360
    advisor_weekly_hours: int = 2
    gpa_scale_max: float = 10.0
    objective_weights: WeightSet = field(default_factory=WeightSet)
    rng_seed: int = 0
    programs: tuple[Program, ...] = DEFAULT_PROGRAMS

    def program_codes(self) -> tuple[str, ...]:
        return tuple(p.code for p in self.programs)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_config(config: SemesterConfig) -> ValidationReport:
    """Check config invariants; an empty report means the config is valid."""
    v: list[str] = []
    if config.team_size_min < 1:
        v.append("team_size_min must be at least 1")
    if config.team_size_min > config.team_size_max:
        v.append("team_size_min exceeds team_size_max")
    if config.min_ballot_choices < 1:
        v.append("min_ballot_choices must be at least 1")
    if config.gpa_scale_max <= 0:
        v.append("gpa_scale_max must be positive")
    w = config.objective_weights
    for name in ("w_rank", "w_size", "w_gpa", "w_interest", "w_seat", "unlisted_rank_penalty"):
        if getattr(w, name) < 0:
            v.append(f"weight {name} must be nonnegative")
    if not config.programs:
        v.append("at least one program must be defined")
    codes = [p.code for p in config.programs]
    if len(set(codes)) != len(codes):
        v.append("program codes must be unique")
    return ValidationReport(tuple(v))


@dataclass(frozen=True)
class ExperienceEntry:
    """A job or internship, past or current, at a named organization."""

    organization: str
    kind: str  # "job" | "internship"
    status: str  # "past" | "current"

    def __post_init__(self) -> None:
        if not self.organization.strip():
            raise InvalidInput("experience entry needs an organization name")
        if self.kind not in ("job", "internship"):
            raise InvalidInput(f"unknown experience kind {self.kind!r}", kind=self.kind)
        if self.status not in ("past", "current"):
            raise InvalidInput(f"unknown experience status {self.status!r}", status=self.status)


@dataclass(frozen=True)
class Student:
    id: str
    name: str
    program: str
    gpa: float
    interests: frozenset[str] = frozenset()
    other_interest: str | None = None
    work_history: tuple[ExperienceEntry, ...] = ()
    family_ties: tuple[str, ...] = ()
    extracurriculars: tuple[str, ...] = ()
    social_activities: tuple[str, ...] = ()
    linkedin: str | None = None


ORG_CATEGORIES = ("company", "research_center", "tech_org", "ngo")


@dataclass(frozen=True)
class Organization:
    id: str
    name: str
    category: str = "company"

    def __post_init__(self) -> None:
        if self.category not in ORG_CATEGORIES:
            raise InvalidInput(f"unknown organization category {self.category!r}", category=self.category)


_WS = re.compile(r"\s+")


def normalize_org_name(name: str) -> str:
    """Trim, collapse internal whitespace, and case-fold an organization name.

    Used both for the org-name uniqueness rule and for conflict matching.
    """
    return _WS.sub(" ", name.strip()).casefold()


def validate_student(student: Student, config: SemesterConfig) -> None:
    """Raise InvalidInput when a student record violates model invariants."""
    if not student.id:
        raise InvalidInput("student id must be nonempty")
    if student.program not in config.program_codes():
        raise InvalidInput(
            f"unknown program {student.program!r}", program=student.program, known=list(config.program_codes())
        )
    if not (0 <= student.gpa <= config.gpa_scale_max):
        raise InvalidInput(
            f"gpa {student.gpa} outside [0, {config.gpa_scale_max}]",
            student_id=student.id,
            gpa=student.gpa,
        )
    unknown = set(student.interests) - set(INTEREST_AREAS)
    if unknown:
        raise InvalidInput(f"unknown interest areas {sorted(unknown)}", areas=sorted(unknown))


def patch_student(student: Student, patch: dict, config: SemesterConfig) -> Student:
    """Apply a partial update, preserving untouched fields."""
    allowed = {
        "name",
        "program",
        "gpa",
        "interests",
        "other_interest",
        "work_history",
        "family_ties",
        "extracurriculars",
        "social_activities",
        "linkedin",
    }
    unknown = set(patch) - allowed
    if unknown:
        raise InvalidInput(f"unknown student fields {sorted(unknown)}", fields=sorted(unknown))
    fields = dict(patch)
    if "interests" in fields:
        fields["interests"] = frozenset(fields["interests"])
    if "work_history" in fields:
        fields["work_history"] = tuple(
            e if isinstance(e, ExperienceEntry) else ExperienceEntry(**e) for e in fields["work_history"]
        )
    for key in ("family_ties", "extracurriculars", "social_activities"):
        if key in fields:
            fields[key] = tuple(fields[key])
    updated = replace(student, **fields)
    validate_student(updated, config)
    return updated


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """Jaccard index of two sets; 0.0 when the union is empty."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 0.0
    return len(sa & sb) / len(union)
