from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from capflow.errors import InvalidInput
from capflow.model import (
    INTEREST_AREAS,
    ExperienceEntry,
    Program,
    SemesterConfig,
    Student,
    jaccard,
    normalize_org_name,
    patch_student,
    validate_config,
    validate_student,
)


def test_defaults_are_valid():
    report = validate_config(SemesterConfig())
    assert report.ok
    assert report.violations == ()


def test_defaults_match_documented_process_parameters():
    config = SemesterConfig()
    assert config.team_size_max == 4
    assert config.min_ballot_choices == 5
    assert config.weekly_hours == 24
    assert config.total_hours == 360
    assert config.advisor_weekly_hours == 2


def test_min_exceeding_max_is_flagged():
    report = validate_config(SemesterConfig(team_size_min=5, team_size_max=4))
    assert any("exceeds" in v for v in report.violations)


def test_zero_ballot_minimum_is_flagged():
    report = validate_config(SemesterConfig(min_ballot_choices=0))
    assert not report.ok


def test_negative_weight_is_flagged():
    from capflow.model import WeightSet

    report = validate_config(SemesterConfig(objective_weights=WeightSet(w_rank=-1.0)))
    assert any("w_rank" in v for v in report.violations)


def test_duplicate_program_codes_flagged():
    report = validate_config(SemesterConfig(programs=(Program("EC"), Program("EC"))))
    assert any("unique" in v for v in report.violations)


def test_empty_programs_flagged():
    report = validate_config(SemesterConfig(programs=()))
    assert not report.ok


def test_fifteen_predefined_interest_areas():
    assert len(INTEREST_AREAS) == 15
    assert "computational_simulation" in INTEREST_AREAS
    assert "cloud_computing" in INTEREST_AREAS


def test_normalize_org_name():
    assert normalize_org_name("  Acme   Corp ") == "acme corp"
    assert normalize_org_name("ACME") == normalize_org_name("Acme ")
    assert normalize_org_name("A\tB\n C") == "a b c"


def test_experience_entry_validation():
    with pytest.raises(InvalidInput):
        ExperienceEntry("  ", "job", "past")
    with pytest.raises(InvalidInput):
        ExperienceEntry("Acme", "volunteer", "past")
    with pytest.raises(InvalidInput):
        ExperienceEntry("Acme", "job", "future")


def test_validate_student_bounds(config):
    ok = Student("s1", "X", "EC", 10.0)
    validate_student(ok, config)
    with pytest.raises(InvalidInput):
        validate_student(Student("s2", "X", "EC", 11.2), config)
    with pytest.raises(InvalidInput):
        validate_student(Student("s3", "X", "??", 5.0), config)
    with pytest.raises(InvalidInput):
        validate_student(Student("s4", "X", "EC", 5.0, interests=frozenset({"nope"})), config)


def test_patch_student_rejects_unknown_fields(config):
    s = Student("s1", "X", "EC", 7.0)
    with pytest.raises(InvalidInput):
        patch_student(s, {"gpa": -1}, config)
    with pytest.raises(InvalidInput):
        patch_student(s, {"favorite_color": "blue"}, config)
    updated = patch_student(s, {"interests": {"robotics"}, "gpa": 8.5}, config)
    assert updated.gpa == 8.5
    assert updated.interests == frozenset({"robotics"})
    assert updated.name == "X"


areas = st.sets(st.sampled_from(sorted(INTEREST_AREAS)), max_size=15)


@given(areas, areas)
def test_jaccard_symmetric_and_bounded(a, b):
    assert jaccard(a, b) == jaccard(b, a)
    assert 0.0 <= jaccard(a, b) <= 1.0


@given(areas)
def test_jaccard_identity(a):
    assert jaccard(a, a) == (1.0 if a else 0.0)
