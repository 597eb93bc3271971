"""Exact small-instance solver used to audit the heuristic.

Branch-and-bound over per-student assignment vectors (students in id
order; options are proposals in id order, then unassigned last). Nonempty
groups must land in [team_size_min, team_size_max]; unassigned students
are allowed and pay the unlisted-rank penalty. Ties on cost resolve to
the lexicographically smallest assignment vector, which depth-first
search in canonical option order yields for free.

The bound combines exact per-term minima: remaining students' cheapest
rank+interest option, the optimal completion of the quadratic size term,
the current seat mismatch (never decreases as groups grow), and zero for
the GPA spread.
"""
from __future__ import annotations

from dataclasses import dataclass

from .allocator import (
    CAUSE_INITIAL,
    Allocation,
    Instance,
    MoveRecord,
    build_allocation,
    allocate,
    rank_on_ballot,
)
from .ballots import alignment_score
from .errors import OracleLimit
from .matching import unmatched_count
from .model import SemesterConfig


@dataclass(frozen=True)
class OracleLimits:
    max_students: int = 12
    max_proposals: int = 5


def _assignment_to_allocation(
    vector: tuple[int, ...], sids: list[str], pids: list[str], instance: Instance, config: SemesterConfig
) -> Allocation:
    groups: dict[str, set[str]] = {}
    unassigned: set[str] = set()
    provenance: dict[str, list[MoveRecord]] = {}
    for sid, choice in zip(sids, vector):
        target = pids[choice] if choice < len(pids) else None
        if target is None:
            unassigned.add(sid)
        else:
            groups.setdefault(target, set()).add(sid)
        provenance[sid] = [MoveRecord(sid, None, target, CAUSE_INITIAL, 0.0)]
    return build_allocation(groups, unassigned, provenance, instance, config)


def exact_allocate(
    instance: Instance, config: SemesterConfig, limits: OracleLimits = OracleLimits()
) -> Allocation:
    """Minimum-objective allocation by exhaustive branch-and-bound search."""
    sids = sorted(instance.students)
    pids = sorted(instance.proposals)
    if len(sids) > limits.max_students:
        raise OracleLimit(
            f"{len(sids)} students exceed the oracle limit of {limits.max_students}",
            students=len(sids),
            max_students=limits.max_students,
        )
    if len(pids) > limits.max_proposals:
        raise OracleLimit(
            f"{len(pids)} proposals exceed the oracle limit of {limits.max_proposals}",
            proposals=len(pids),
            max_proposals=limits.max_proposals,
        )

    w = config.objective_weights
    cap = config.team_size_max
    floor = config.team_size_min
    n = len(sids)
    n_opts = len(pids) + 1  # last option = unassigned

    # Immediate per-student cost of each option (rank + interest terms).
    opt_cost: list[list[float]] = []
    for sid in sids:
        row = []
        for pid in pids:
            rank = rank_on_ballot(instance, sid, pid)
            rank_cost = float(rank) if rank is not None else w.unlisted_rank_penalty
            interest = 1.0 - alignment_score(instance.students[sid], instance.proposals[pid])
            row.append(w.w_rank * rank_cost + w.w_interest * interest)
        row.append(w.w_rank * w.unlisted_rank_penalty)
        opt_cost.append(row)
    min_tail = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        min_tail[i] = min_tail[i + 1] + min(opt_cost[i])

    def size_floor_cost(counts: list[int], remaining: int) -> float | None:
        """Exact minimum of the size term over valid completions, or None
        when the opened groups cannot all reach the floor."""
        deficit = 0
        bases = []
        for c in counts:
            if c > 0:
                base = max(c, floor)
                deficit += base - c
                bases.append(base)
        if deficit > remaining:
            return None
        leftover = remaining - deficit
        gains = []
        for base in bases:
            for s in range(base, cap):
                gains.append(2 * (cap - s) - 1)
        gains.sort(reverse=True)
        cost = float(sum((cap - b) ** 2 for b in bases))
        for g in gains[:leftover]:
            cost -= g
        return cost

    # Feasible seeds give the search a sound upper bound; the returned
    # solution still comes from the search so ties stay lexicographic.
    all_unassigned = _assignment_to_allocation(tuple([len(pids)] * n), sids, pids, instance, config)
    bound = all_unassigned.objective.total
    heuristic = allocate(instance, config)
    if all(floor <= len(m) <= cap for m in heuristic.groups.values()):
        bound = min(bound, heuristic.objective.total)

    best_cost = bound
    best_vector: tuple[int, ...] | None = None

    counts = [0] * len(pids)
    members: list[list[str]] = [[] for _ in pids]
    unmatched = [0] * len(pids)
    vector: list[int] = []
    profiles = [instance.proposals[pid].seat_profile for pid in pids]

    def search(i: int, partial: float, seat_total: int) -> None:
        nonlocal best_cost, best_vector
        if i == n:
            leaf = _assignment_to_allocation(tuple(vector), sids, pids, instance, config)
            cost = leaf.objective.total
            if cost < best_cost or (best_vector is None and cost <= best_cost):
                best_cost = cost
                best_vector = tuple(vector)
            return
        for opt in range(n_opts):
            if opt < len(pids):
                if counts[opt] >= cap:
                    continue
                counts[opt] += 1
                members[opt].append(sids[i])
                prev_unmatched = unmatched[opt]
                unmatched[opt] = unmatched_count(
                    (instance.students[s] for s in members[opt]), profiles[opt]
                )
                new_seat = seat_total - prev_unmatched + unmatched[opt]
            else:
                new_seat = seat_total
            remaining = n - i - 1
            size_lb = size_floor_cost(counts, remaining)
            if size_lb is not None:
                lower = (
                    partial
                    + opt_cost[i][opt]
                    + min_tail[i + 1]
                    + w.w_size * size_lb
                    + w.w_seat * float(new_seat)
                )
                prune = lower > best_cost if best_vector is None else lower >= best_cost
                if not prune:
                    vector.append(opt)
                    search(i + 1, partial + opt_cost[i][opt], new_seat)
                    vector.pop()
            if opt < len(pids):
                counts[opt] -= 1
                members[opt].pop()
                unmatched[opt] = unmatched_count(
                    (instance.students[s] for s in members[opt]), profiles[opt]
                )

    search(0, 0.0, 0)
    assert best_vector is not None
    return _assignment_to_allocation(best_vector, sids, pids, instance, config)
