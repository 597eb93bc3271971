from __future__ import annotations

import pytest

from capflow.allocator import Allocation, build_allocation, initial_assignment, objective
from capflow.errors import InvalidInput
from capflow.model import SemesterConfig

from conftest import approved_proposal, make_student


def _instance_from_semester(semester):
    return semester.instance()


def _alloc(groups: dict[str, set[str]], unassigned: set[str], instance, config) -> Allocation:
    provenance = {}
    for pid, members in groups.items():
        for sid in members:
            provenance[sid] = []
    for sid in unassigned:
        provenance[sid] = []
    return build_allocation(groups, unassigned, provenance, instance, config)


class TestHandComputed6x2:
    """Frozen values for the committed 6-student / 2-project fixture,
    derived by hand from the cost formula: first choices everywhere
    (rank 0), two groups of three ((4-3)^2 each), alignments
    1/2, 1, 1, 1/2, 1/2, 0 (interest cost 2.5), all seats matched, and
    group GPA means 19/30 and 26/30 whose two-point spread is 7/60."""

    def test_breakdown(self, semester_6x2):
        instance = semester_6x2.instance()
        config = semester_6x2.config
        allocation = initial_assignment(instance, config)
        assert {pid: set(m) for pid, m in allocation.groups.items()} == {
            "pa": {"a1", "a2", "a5"},
            "pb": {"a3", "a4", "a6"},
        }
        b = allocation.objective
        assert b.rank_cost == 0.0
        assert b.size_cost == 2.0
        assert b.interest_cost == 2.5
        assert b.seat_cost == 0.0
        assert b.gpa_spread_cost == pytest.approx(7 / 60, rel=1e-12)
        assert b.total == pytest.approx(337 / 30, rel=1e-12)

    def test_weighted_total_identity(self, semester_6x2):
        instance = semester_6x2.instance()
        config = semester_6x2.config
        b = initial_assignment(instance, config).objective
        w = config.objective_weights
        assert b.total == pytest.approx(
            w.w_rank * b.rank_cost
            + w.w_size * b.size_cost
            + w.w_gpa * b.gpa_spread_cost
            + w.w_interest * b.interest_cost
            + w.w_seat * b.seat_cost
        )


def _perfect_semester():
    from conftest import base_semester
    from capflow.ballots import Ballot
    from capflow.workflow import Phase

    sem = base_semester(phase=Phase.allocation)
    sem.proposals["p1"] = approved_proposal("p1", areas={"robotics"})
    sem.proposals["p2"] = approved_proposal("p2", areas={"robotics"})
    for i in range(8):
        sid = f"s{i + 1}"
        first = "p1" if i < 4 else "p2"
        second = "p2" if i < 4 else "p1"
        sem.students[sid] = make_student(sid, program="EC", gpa=8.0, interests={"robotics"})
        sem.ballots[sid] = Ballot(sid, (first, second), "t")
    return sem


def test_perfect_allocation_costs_zero():
    sem = _perfect_semester()
    instance = sem.instance()
    allocation = initial_assignment(instance, sem.config)
    assert allocation.objective.total == 0.0


def test_size_term_example_matches_spec_value():
    # one group of 3, everything else ideal: total equals w_size * 1 = 3.0
    sem = _perfect_semester()
    for sid in ("s4", "s5", "s6", "s7", "s8"):
        del sem.students[sid]
        del sem.ballots[sid]
    instance = sem.instance()
    allocation = _alloc({"p1": {"s1", "s2", "s3"}}, set(), instance, sem.config)
    assert allocation.objective.size_cost == 1.0
    assert allocation.objective.total == 3.0


def test_oversize_group_also_pays_quadratic_size_cost():
    sem = _perfect_semester()
    instance = sem.instance()
    allocation = _alloc(
        {"p1": {"s1", "s2", "s3", "s4", "s5"}, "p2": {"s6", "s7", "s8"}}, set(), instance, sem.config
    )
    assert allocation.objective.size_cost == 2.0  # (4-5)^2 + (4-3)^2


def test_unassigned_pay_penalty():
    sem = _perfect_semester()
    instance = sem.instance()
    allocation = _alloc({}, set(instance.students), instance, sem.config)
    w = sem.config.objective_weights
    assert allocation.objective.rank_cost == 8 * w.unlisted_rank_penalty
    assert allocation.objective.total == w.w_rank * 8 * w.unlisted_rank_penalty


def test_off_ballot_assignment_pays_penalty():
    sem = _perfect_semester()
    sem.proposals["p3"] = approved_proposal("p3", areas={"robotics"})
    instance = sem.instance()
    groups = {"p3": {"s1", "s2", "s3", "s4"}, "p2": {"s5", "s6", "s7", "s8"}}
    allocation = _alloc(groups, set(), instance, sem.config)
    w = sem.config.objective_weights
    assert allocation.objective.rank_cost == 4 * w.unlisted_rank_penalty


def test_structural_violations_raise():
    sem = _perfect_semester()
    instance = sem.instance()
    with pytest.raises(InvalidInput):
        _alloc({"p1": {"s1"}, "p2": {"s1"}}, set(), instance, sem.config)
    with pytest.raises(InvalidInput):
        _alloc({"p1": {"ghost"}}, set(), instance, sem.config)
    with pytest.raises(InvalidInput):
        # s8 missing entirely
        _alloc({"p1": {"s1", "s2", "s3", "s4"}, "p2": {"s5", "s6", "s7"}}, set(), instance, sem.config)
