from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, strategies as st

from capflow.balance import coverage, required_projects, sourcing_gaps
from capflow.model import SemesterConfig

from conftest import approved_proposal, make_student

MIXED_PROFILE_SEATS = [{"EM"}, {"EM"}, {"EX", "EM"}, {"EC", "EX", "EM", "CS"}]


def test_hundred_students_need_25_projects(config):
    cohort = [make_student(f"s{i}", program="EC") for i in range(100)]
    report = required_projects(cohort, config)
    assert report.total.necessary_projects == 25


def test_empty_cohort_needs_nothing(config):
    report = required_projects([], config)
    assert report.total.necessary_projects == 0
    assert report.total.coverage_ratio is None


def test_ten_students_need_three_projects(config):
    cohort = [make_student(f"s{i}") for i in range(10)]
    assert required_projects(cohort, config).total.necessary_projects == 3


def test_coverage_counts_every_program_a_seat_allows(config):
    cohort = [make_student(f"s{i}", program="EM") for i in range(30)]
    proposals = [approved_proposal(f"p{i}", seats=MIXED_PROFILE_SEATS) for i in range(10)]
    report = coverage(proposals, cohort, config)
    em = report.per_program["EM"]
    assert em.supplied_seats == 40
    assert em.coverage_ratio == pytest.approx(40 / 30)
    # seats 1 and 2 admit only EM; seat 3 admits EX too
    assert report.per_program["EX"].supplied_seats == 20
    assert report.per_program["EC"].supplied_seats == 10
    assert report.total.supplied_seats == 40  # 4 physical seats x 10 proposals


def test_no_approved_proposals_means_zero_ratios(config):
    cohort = [make_student(f"s{i}") for i in range(5)]
    report = coverage([], cohort, config)
    assert report.per_program["EC"].coverage_ratio == 0.0
    assert report.total.coverage_ratio == 0.0


def test_empty_cohort_ratios_not_applicable(config):
    report = coverage([approved_proposal("p1")], [], config)
    assert report.total.coverage_ratio is None
    assert report.per_program["EC"].coverage_ratio is None


def test_per_program_seat_sums_may_exceed_physical(config):
    cohort = [make_student("s1", program="EC"), make_student("s2", program="CS")]
    proposals = [approved_proposal("p1", seats=[{"EC", "CS"}])]
    report = coverage(proposals, cohort, config)
    per_program_sum = sum(r.supplied_seats for r in report.per_program.values())
    assert report.total.supplied_seats == 1
    assert per_program_sum == 2
    assert per_program_sum >= report.total.supplied_seats


def test_coverage_monotone_in_proposals(config):
    rng = random.Random(7)
    cohort = [make_student(f"s{i}", program=rng.choice(("EC", "EX", "EM", "CS"))) for i in range(20)]
    proposals = []
    previous = coverage(proposals, cohort, config)
    for i in range(12):
        seats = [set(rng.sample(("EC", "EX", "EM", "CS"), rng.randint(1, 4))) for _ in range(rng.randint(1, 4))]
        proposals.append(approved_proposal(f"p{i}", seats=seats))
        report = coverage(proposals, cohort, config)
        for code in config.program_codes():
            before = previous.per_program[code].coverage_ratio
            after = report.per_program[code].coverage_ratio
            if before is not None:
                assert after >= before
        previous = report


@given(st.integers(min_value=0, max_value=2000))
def test_required_times_cap_covers_everyone(n):
    config = SemesterConfig()
    cohort = [make_student(f"s{i}") for i in range(n)]
    report = required_projects(cohort, config)
    assert report.total.necessary_projects * config.team_size_max >= n
    assert report.total.necessary_projects == math.ceil(n / config.team_size_max)


def test_sourcing_gap_flags_unserved_interest():
    cohort = [make_student(f"s{i}", interests={"robotics"}) for i in range(12)]
    proposals = [approved_proposal("p1", areas={"data_science"})]
    rows = sourcing_gaps(cohort, proposals)
    by_area = {r.area: r for r in rows}
    assert by_area["robotics"].gap_flag
    assert by_area["robotics"].student_interest_count == 12
    assert not by_area["data_science"].gap_flag
    assert rows[0].area == "robotics"  # sorted by interest, descending


def test_sourcing_gap_ignores_rejected_proposals():
    cohort = [make_student("s1", interests={"robotics"})]
    from dataclasses import replace

    rejected = replace(approved_proposal("p1", areas={"robotics"}), status="rejected")
    rows = sourcing_gaps(cohort, [rejected])
    assert rows[0].gap_flag


def test_sourcing_gaps_empty_inputs():
    assert sourcing_gaps([], []) == []
