#!/usr/bin/env python3
"""Walk one synthetic semester through the whole pipeline, printing each
stage: registration, proposals, conformity review, balance, ballots,
allocation, a manual move with preview, finalization, advisors, surveys.

    python3 scripts/run_semester_demo.py [--students 20] [--proposals 6]
"""
from __future__ import annotations

import argparse
import random

from capflow import allocator, synth
from capflow.advisors import Advisor, assign_advisors
from capflow.balance import coverage, required_projects
from capflow.ballots import demand_stats
from capflow.surveys import nps_summary, record_survey
from capflow.workflow import Phase, advance


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--students", type=int, default=20)
    parser.add_argument("--proposals", type=int, default=6)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    semester = synth.make_semester(args.seed, args.students, args.proposals, phase=Phase.allocation)
    print(f"cohort: {len(semester.students)} students, {len(semester.proposals)} approved proposals")

    need = required_projects(semester.students.values(), semester.config)
    cov = coverage(semester.proposals.values(), semester.students.values(), semester.config)
    print(f"necessary projects: {need.total.necessary_projects}; seat coverage {cov.total.coverage_ratio:.2f}")

    stats = demand_stats(semester.ballots.values(), sorted(semester.proposals))
    hottest = max(stats, key=lambda s: s.first_choice_count)
    print(f"hottest proposal: {hottest.proposal_id} with {hottest.first_choice_count} first choices")

    semester.allocation = allocator.allocate(semester.instance(), semester.config)
    a = semester.allocation
    sizes = {pid: len(m) for pid, m in sorted(a.groups.items())}
    print(f"heuristic groups: {sizes}; unassigned: {sorted(a.unassigned)}")
    print(f"objective: {a.objective.total:.3f} (rank {a.objective.rank_cost:.1f}, size {a.objective.size_cost:.1f})")

    rng = random.Random(args.seed)
    sid = rng.choice(sorted(semester.students))
    targets = [pid for pid in sorted(a.groups) if sid not in a.groups[pid]]
    if targets:
        preview = allocator.what_if_move(a, sid, targets[0], semester.instance(), semester.config)
        print(f"what-if {sid} -> {targets[0]}: delta {preview.objective_delta:+.3f}, sizes {preview.new_sizes}")

    for flag in a.conflicts:
        semester.allocation = allocator.waive_conflict(semester.allocation, flag.student_id, flag.proposal_id)
        print(f"waived conflict: {flag.student_id} x {flag.proposal_id} ({flag.kind})")

    try:
        semester.allocation = allocator.finalize(semester.allocation, semester.config)
        print("allocation finalized")
    except Exception as exc:  # demo keeps going to show the failure shape
        print(f"finalize blocked: {exc}")
        return

    advance(semester, Phase.advisor_assignment)
    roster = {f"adv{i}": Advisor(f"adv{i}", f"Prof {i}", max_load=2) for i in range(max(2, len(a.groups)))}
    semester.advisors = roster
    semester.advisor_assignments = assign_advisors(semester.allocation.groups, roster, semester.proposals)
    print(f"advisors: {semester.advisor_assignments}")

    for phase in (Phase.execution, Phase.midterm_review, Phase.final_review,
                  Phase.executive_presentation, Phase.surveys_open):
        advance(semester, phase)
    for pid in sorted(semester.allocation.groups):
        org = semester.proposals[pid].form.org_id
        record_survey(semester, "partner", {"org_id": org, "proposal_id": pid, "recommend_score": rng.randint(7, 10)})
    summary = nps_summary(semester.partner_surveys.values())
    print(f"partner mean score {summary.mean_score:.2f}, classic NPS {summary.classic_nps:.0f}")
    print(f"final phase: {semester.phase.value}; version {semester.version}")


if __name__ == "__main__":
    main()
