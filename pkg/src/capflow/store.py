"""Persistence and interchange formats.

A semester lives in a single canonical JSON snapshot: keys sorted,
collections keyed or ordered by id, so equal states are byte-equal and
goldens diff cleanly. Saving over a newer file raises a version conflict.

Snapshot layout (top-level keys)::

    format: "capflow.semester"  schema_version: 1
    config, organizations, students, proposals, ballots,
    allocation?, advisors, advisor_assignments,
    partner_surveys, student_surveys, phase, version

Student CSV import columns (header mandatory, UTF-8, comma-separated,
quoted fields): id, name, program, gpa are required; interests,
other_interest, work_history, family_ties, extracurriculars,
social_activities, linkedin are optional. Multi-valued cells use ";"
between entries; work_history entries are "organization|kind|status".

The phase schedule file is a JSON object mapping phase name to start
day-offset.
"""
from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, IO

from .advisors import Advisor
from .allocator import Allocation, ConflictFlag, MoveRecord, ObjectiveBreakdown
from .ballots import Ballot
from .errors import IntegrityError, InvalidInput, NotFound, VersionConflict
from .intake import ConformityChecklist, Proposal, ProposalForm, SeatProfile, PROPOSAL_STATUSES
from .model import (
    ExperienceEntry,
    Organization,
    Program,
    SemesterConfig,
    Student,
    WeightSet,
    validate_config,
    validate_student,
)
from .state import Semester
from .surveys import PartnerSurvey, StudentSurvey
from .workflow import Phase, PhaseSchedule

FORMAT_NAME = "capflow.semester"
SCHEMA_VERSION = 1


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


# -- dataclass <-> dict ----------------------------------------------------


def _config_to_dict(config: SemesterConfig) -> dict:
    return {
        "team_size_max": config.team_size_max,
        "team_size_min": config.team_size_min,
        "min_ballot_choices": config.min_ballot_choices,
        "weekly_hours": config.weekly_hours,
        "total_hours": config.total_hours,
        "advisor_weekly_hours": config.advisor_weekly_hours,
        "gpa_scale_max": config.gpa_scale_max,
        "rng_seed": config.rng_seed,
        "objective_weights": {
            "w_rank": config.objective_weights.w_rank,
            "w_size": config.objective_weights.w_size,
            "w_gpa": config.objective_weights.w_gpa,
            "w_interest": config.objective_weights.w_interest,
            "w_seat": config.objective_weights.w_seat,
            "unlisted_rank_penalty": config.objective_weights.unlisted_rank_penalty,
        },
        "programs": [{"code": p.code, "label": p.label} for p in config.programs],
    }


def _config_from_dict(data: dict) -> SemesterConfig:
    weights = WeightSet(**data.get("objective_weights", {}))
    programs = tuple(Program(**p) for p in data.get("programs", []))
    return SemesterConfig(
        team_size_max=data["team_size_max"],
        team_size_min=data["team_size_min"],
        min_ballot_choices=data["min_ballot_choices"],
        weekly_hours=data.get("weekly_hours", 24),
        total_hours=data.get("total_hours", 360),
        advisor_weekly_hours=data.get("advisor_weekly_hours", 2),
        gpa_scale_max=data["gpa_scale_max"],
        objective_weights=weights,
        rng_seed=data.get("rng_seed", 0),
        programs=programs,
    )


def student_to_dict(s: Student) -> dict:
    return {
        "id": s.id,
        "name": s.name,
        "program": s.program,
        "gpa": s.gpa,
        "interests": sorted(s.interests),
        "other_interest": s.other_interest,
        "work_history": [
            {"organization": e.organization, "kind": e.kind, "status": e.status} for e in s.work_history
        ],
        "family_ties": list(s.family_ties),
        "extracurriculars": list(s.extracurriculars),
        "social_activities": list(s.social_activities),
        "linkedin": s.linkedin,
    }


def student_from_dict(data: dict) -> Student:
    return Student(
        id=data["id"],
        name=data["name"],
        program=data["program"],
        gpa=data["gpa"],
        interests=frozenset(data.get("interests", [])),
        other_interest=data.get("other_interest"),
        work_history=tuple(ExperienceEntry(**e) for e in data.get("work_history", [])),
        family_ties=tuple(data.get("family_ties", [])),
        extracurriculars=tuple(data.get("extracurriculars", [])),
        social_activities=tuple(data.get("social_activities", [])),
        linkedin=data.get("linkedin"),
    )


def proposal_to_dict(p: Proposal) -> dict:
    return {
        "id": p.id,
        "status": p.status,
        "review_notes": p.review_notes,
        "form": {
            "title": p.form.title,
            "description": p.form.description,
            "deliverables": p.form.deliverables,
            "resources": p.form.resources,
            "observations": p.form.observations,
            "areas": sorted(p.form.areas),
            "org_id": p.form.org_id,
        },
        "checklist": None if p.checklist is None else {"items": list(p.checklist.items), "notes": p.checklist.notes},
        "seat_profile": None if p.seat_profile is None else {"seats": [sorted(seat) for seat in p.seat_profile.seats]},
    }


def _proposal_from_dict(data: dict) -> Proposal:
    form = data["form"]
    checklist = data.get("checklist")
    profile = data.get("seat_profile")
    return Proposal(
        id=data["id"],
        form=ProposalForm(
            title=form["title"],
            description=form["description"],
            deliverables=form["deliverables"],
            areas=frozenset(form["areas"]),
            org_id=form["org_id"],
            resources=form.get("resources"),
            observations=form.get("observations"),
        ),
        status=data["status"],
        checklist=None if checklist is None else ConformityChecklist(tuple(checklist["items"]), checklist.get("notes", "")),
        seat_profile=None if profile is None else SeatProfile(tuple(frozenset(seat) for seat in profile["seats"])),
        review_notes=data.get("review_notes", ""),
    )


def allocation_to_dict(a: Allocation) -> dict:
    return {
        "groups": {pid: sorted(members) for pid, members in a.groups.items()},
        "unassigned": sorted(a.unassigned),
        "provenance": {
            sid: [
                {
                    "student_id": r.student_id,
                    "from": r.from_proposal,
                    "to": r.to_proposal,
                    "cause": r.cause,
                    "objective_delta": r.objective_delta,
                }
                for r in records
            ]
            for sid, records in a.provenance.items()
        },
        "objective": {
            "rank_cost": a.objective.rank_cost,
            "size_cost": a.objective.size_cost,
            "gpa_spread_cost": a.objective.gpa_spread_cost,
            "interest_cost": a.objective.interest_cost,
            "seat_cost": a.objective.seat_cost,
            "total": a.objective.total,
        },
        "conflicts": [
            {
                "student_id": f.student_id,
                "proposal_id": f.proposal_id,
                "kind": f.kind,
                "matched_org": f.matched_org,
                "status": f.status,
            }
            for f in a.conflicts
        ],
        "warnings": list(a.warnings),
        "finalized": a.finalized,
    }


def _allocation_from_dict(data: dict) -> Allocation:
    return Allocation(
        groups={pid: frozenset(members) for pid, members in data["groups"].items()},
        unassigned=frozenset(data["unassigned"]),
        provenance={
            sid: tuple(
                MoveRecord(r["student_id"], r["from"], r["to"], r["cause"], r["objective_delta"]) for r in records
            )
            for sid, records in data["provenance"].items()
        },
        objective=ObjectiveBreakdown(**data["objective"]),
        conflicts=tuple(ConflictFlag(**f) for f in data["conflicts"]),
        warnings=tuple(data["warnings"]),
        finalized=data["finalized"],
    )


def semester_to_dict(semester: Semester) -> dict:
    return {
        "format": FORMAT_NAME,
        "schema_version": SCHEMA_VERSION,
        "config": _config_to_dict(semester.config),
        "organizations": {
            oid: {"id": o.id, "name": o.name, "category": o.category} for oid, o in semester.organizations.items()
        },
        "students": {sid: student_to_dict(s) for sid, s in semester.students.items()},
        "proposals": {pid: proposal_to_dict(p) for pid, p in semester.proposals.items()},
        "ballots": {
            sid: {"student_id": b.student_id, "choices": list(b.choices), "submitted_at": b.submitted_at}
            for sid, b in semester.ballots.items()
        },
        "allocation": None if semester.allocation is None else allocation_to_dict(semester.allocation),
        "advisors": {
            aid: {"id": a.id, "name": a.name, "max_load": a.max_load, "area_prefs": sorted(a.area_prefs)}
            for aid, a in semester.advisors.items()
        },
        "advisor_assignments": dict(semester.advisor_assignments),
        "partner_surveys": {
            key: {
                "org_id": s.org_id,
                "proposal_id": s.proposal_id,
                "recommend_score": s.recommend_score,
                "progressed_as_expected": s.progressed_as_expected,
                "progress_comments": s.progress_comments,
                "communication_comments": s.communication_comments,
                "team_organization_comments": s.team_organization_comments,
                "other_observations": s.other_observations,
                "phase_tag": s.phase_tag,
            }
            for key, s in semester.partner_surveys.items()
        },
        "student_surveys": {
            key: {
                "student_id": s.student_id,
                "proposal_id": s.proposal_id,
                "recommend_company": s.recommend_company,
                "top_choice_employer": s.top_choice_employer,
                "comments": s.comments,
                "phase_tag": s.phase_tag,
            }
            for key, s in semester.student_surveys.items()
        },
        "phase": semester.phase.value,
        "version": semester.version,
    }


def semester_from_dict(data: dict) -> Semester:
    if data.get("format") != FORMAT_NAME:
        raise IntegrityError(f"not a {FORMAT_NAME} snapshot", format=data.get("format"))
    if data.get("schema_version") != SCHEMA_VERSION:
        raise IntegrityError(
            f"unsupported schema_version {data.get('schema_version')}", schema_version=data.get("schema_version")
        )
    semester = Semester(
        config=_config_from_dict(data["config"]),
        organizations={oid: Organization(**o) for oid, o in data["organizations"].items()},
        students={sid: student_from_dict(s) for sid, s in data["students"].items()},
        proposals={pid: _proposal_from_dict(p) for pid, p in data["proposals"].items()},
        ballots={sid: Ballot(b["student_id"], tuple(b["choices"]), b["submitted_at"]) for sid, b in data["ballots"].items()},
        allocation=None if data.get("allocation") is None else _allocation_from_dict(data["allocation"]),
        advisors={
            aid: Advisor(a["id"], a["name"], a["max_load"], frozenset(a.get("area_prefs", [])))
            for aid, a in data["advisors"].items()
        },
        advisor_assignments=dict(data["advisor_assignments"]),
        partner_surveys={key: PartnerSurvey(**s) for key, s in data["partner_surveys"].items()},
        student_surveys={key: StudentSurvey(**s) for key, s in data["student_surveys"].items()},
        phase=Phase(data["phase"]),
        version=data["version"],
    )
    _check_integrity(semester)
    return semester


def _check_integrity(semester: Semester) -> None:
    problems: list[str] = []
    report = validate_config(semester.config)
    problems.extend(report.violations)
    for sid, student in semester.students.items():
        if sid != student.id:
            problems.append(f"student key {sid!r} != record id {student.id!r}")
        try:
            validate_student(student, semester.config)
        except InvalidInput as exc:
            problems.append(str(exc))
    for pid, proposal in semester.proposals.items():
        if pid != proposal.id:
            problems.append(f"proposal key {pid!r} != record id {proposal.id!r}")
        if proposal.status not in PROPOSAL_STATUSES:
            problems.append(f"proposal {pid!r} has unknown status {proposal.status!r}")
        if proposal.form.org_id not in semester.organizations:
            problems.append(f"proposal {pid!r} references unknown organization {proposal.form.org_id!r}")
        if proposal.status == "approved" and (
            proposal.checklist is None or not proposal.checklist.all_pass or proposal.seat_profile is None
        ):
            problems.append(f"proposal {pid!r} approved without passing checklist and seat profile")
    for sid, ballot in semester.ballots.items():
        if sid not in semester.students:
            problems.append(f"ballot from unknown student {sid!r}")
        for pid in ballot.choices:
            if pid not in semester.proposals:
                problems.append(f"ballot of {sid!r} references unknown proposal {pid!r}")
    if semester.allocation is not None:
        for pid, members in semester.allocation.groups.items():
            if pid not in semester.proposals:
                problems.append(f"allocation group on unknown proposal {pid!r}")
            for sid in members:
                if sid not in semester.students:
                    problems.append(f"allocation places unknown student {sid!r}")
        for sid in semester.allocation.unassigned:
            if sid not in semester.students:
                problems.append(f"allocation lists unknown unassigned student {sid!r}")
    for pid, aid in semester.advisor_assignments.items():
        if aid not in semester.advisors:
            problems.append(f"group {pid!r} assigned to unknown advisor {aid!r}")
        if pid not in semester.proposals:
            problems.append(f"advisor assignment on unknown proposal {pid!r}")
    for key, survey in semester.partner_surveys.items():
        if survey.org_id not in semester.organizations:
            problems.append(f"partner survey {key!r} from unknown organization {survey.org_id!r}")
        if survey.proposal_id not in semester.proposals:
            problems.append(f"partner survey {key!r} on unknown proposal {survey.proposal_id!r}")
    for key, survey in semester.student_surveys.items():
        if survey.student_id not in semester.students:
            problems.append(f"student survey {key!r} from unknown student {survey.student_id!r}")
        if survey.proposal_id not in semester.proposals:
            problems.append(f"student survey {key!r} on unknown proposal {survey.proposal_id!r}")
    if problems:
        shown = "; ".join(problems[:3]) + ("; ..." if len(problems) > 3 else "")
        raise IntegrityError(
            f"snapshot failed integrity validation with {len(problems)} problem(s): {shown}",
            problems=problems,
        )


def save(semester: Semester, path: str | Path) -> None:
    """Write the canonical snapshot; refuses to clobber a newer version."""
    path = Path(path)
    if path.exists():
        try:
            existing = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            existing = None
        if isinstance(existing, dict) and existing.get("version", -1) > semester.version:
            raise VersionConflict(
                f"on-disk snapshot is version {existing['version']}, newer than {semester.version}",
                disk_version=existing["version"],
                version=semester.version,
            )
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(canonical_json(semester_to_dict(semester)), encoding="utf-8")
    os.replace(tmp, path)


def load(path: str | Path) -> Semester:
    path = Path(path)
    if not path.exists():
        raise NotFound(f"snapshot {path} does not exist", path=str(path))
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise IntegrityError(f"snapshot {path} is not valid JSON: {exc}") from exc
    return semester_from_dict(data)


def export_allocation(semester: Semester) -> str:
    """Canonical allocation export: groups, provenance, objective, advisor
    map, and conflict flags. Byte-stable for a given state."""
    if semester.allocation is None:
        raise NotFound("semester has no allocation to export")
    payload = allocation_to_dict(semester.allocation)
    payload["advisor_assignments"] = dict(semester.advisor_assignments)
    return canonical_json(payload)


# -- CSV import -------------------------------------------------------------

_REQUIRED_COLUMNS = ("id", "name", "program", "gpa")
_OPTIONAL_COLUMNS = (
    "interests",
    "other_interest",
    "work_history",
    "family_ties",
    "extracurriculars",
    "social_activities",
    "linkedin",
)


@dataclass(frozen=True)
class CsvRowError:
    line: int
    message: str


def _split_multi(cell: str) -> list[str]:
    return [part.strip() for part in cell.split(";") if part.strip()]


def _parse_row(row: dict[str, str], config: SemesterConfig) -> Student:
    try:
        gpa = float(row["gpa"])
    except ValueError:
        raise InvalidInput(f"gpa {row['gpa']!r} is not a number", gpa=row["gpa"]) from None
    work = []
    for entry in _split_multi(row.get("work_history", "") or ""):
        parts = entry.split("|")
        if len(parts) != 3:
            raise InvalidInput(f"work_history entry {entry!r} is not 'organization|kind|status'", entry=entry)
        work.append(ExperienceEntry(parts[0].strip(), parts[1].strip(), parts[2].strip()))
    student = Student(
        id=row["id"].strip(),
        name=row["name"].strip(),
        program=row["program"].strip(),
        gpa=gpa,
        interests=frozenset(_split_multi(row.get("interests", "") or "")),
        other_interest=(row.get("other_interest") or "").strip() or None,
        work_history=tuple(work),
        family_ties=tuple(_split_multi(row.get("family_ties", "") or "")),
        extracurriculars=tuple(_split_multi(row.get("extracurriculars", "") or "")),
        social_activities=tuple(_split_multi(row.get("social_activities", "") or "")),
        linkedin=(row.get("linkedin") or "").strip() or None,
    )
    validate_student(student, config)
    return student


def import_students_csv(
    source: str | Path | IO[str],
    config: SemesterConfig,
    all_or_nothing: bool = False,
) -> tuple[list[Student], list[CsvRowError]]:
    """Parse a student roster CSV.

    In permissive mode invalid rows are reported with their line numbers
    and the rest imported; with ``all_or_nothing`` any row error aborts
    the import.
    """
    if isinstance(source, (str, Path)):
        handle: IO[str] = open(source, newline="", encoding="utf-8")
        close = True
    else:
        handle = source
        close = False
    try:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [c for c in _REQUIRED_COLUMNS if c not in header]
        if missing:
            raise InvalidInput(f"CSV is missing mandatory columns {missing}", columns=missing)
        students: list[Student] = []
        errors: list[CsvRowError] = []
        seen: set[str] = set()
        for line, row in enumerate(reader, start=2):
            try:
                student = _parse_row(row, config)
                if student.id in seen:
                    raise InvalidInput(f"duplicate student id {student.id!r}", student_id=student.id)
                seen.add(student.id)
                students.append(student)
            except InvalidInput as exc:
                errors.append(CsvRowError(line, exc.message))
        if errors and all_or_nothing:
            raise InvalidInput(
                f"import aborted: {len(errors)} invalid row(s)",
                rows=[{"line": e.line, "message": e.message} for e in errors],
            )
        return students, errors
    finally:
        if close:
            handle.close()


# -- proposal JSON import -----------------------------------------------------


def import_proposals_json(source: str | Path | IO[str]) -> tuple[list[ProposalForm], list[CsvRowError]]:
    """Parse a JSON array of proposal forms (the submission payload):
    title, description, deliverables, areas, org_id, plus optional
    resources and observations. Invalid entries are reported by index."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"proposal import is not valid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise InvalidInput("proposal import must be a JSON array of forms")
    forms: list[ProposalForm] = []
    errors: list[CsvRowError] = []
    for i, entry in enumerate(data):
        try:
            missing = [k for k in ("title", "description", "deliverables", "areas", "org_id") if k not in entry]
            if missing:
                raise InvalidInput(f"missing fields {missing}", fields=missing)
            forms.append(
                ProposalForm(
                    title=entry["title"],
                    description=entry["description"],
                    deliverables=entry["deliverables"],
                    areas=frozenset(entry["areas"]),
                    org_id=entry["org_id"],
                    resources=entry.get("resources"),
                    observations=entry.get("observations"),
                )
            )
        except InvalidInput as exc:
            errors.append(CsvRowError(i, exc.message))
    return forms, errors


# -- survey CSV export --------------------------------------------------------


def export_surveys_csv(semester: Semester, kind: str) -> str:
    """Raw survey responses as CSV, rows in canonical key order."""
    import io as _io

    buffer = _io.StringIO()
    writer = csv.writer(buffer)
    if kind == "partner":
        writer.writerow(
            ["org_id", "proposal_id", "recommend_score", "progressed_as_expected", "phase_tag",
             "progress_comments", "communication_comments", "team_organization_comments", "other_observations"]
        )
        for key in sorted(semester.partner_surveys):
            s = semester.partner_surveys[key]
            writer.writerow(
                [s.org_id, s.proposal_id, s.recommend_score, s.progressed_as_expected, s.phase_tag,
                 s.progress_comments, s.communication_comments, s.team_organization_comments, s.other_observations]
            )
    elif kind == "student":
        writer.writerow(["student_id", "proposal_id", "recommend_company", "top_choice_employer", "phase_tag", "comments"])
        for key in sorted(semester.student_surveys):
            s = semester.student_surveys[key]
            writer.writerow([s.student_id, s.proposal_id, s.recommend_company, s.top_choice_employer, s.phase_tag, s.comments])
    else:
        raise InvalidInput(f"unknown survey kind {kind!r}", kind=kind)
    return buffer.getvalue()


# -- phase schedule ----------------------------------------------------------


def save_schedule(schedule: PhaseSchedule, path: str | Path) -> None:
    Path(path).write_text(
        canonical_json({phase.value: offset for phase, offset in schedule.offsets.items()}), encoding="utf-8"
    )


def load_schedule(path: str | Path) -> PhaseSchedule:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return PhaseSchedule({Phase(name): offset for name, offset in data.items()})
