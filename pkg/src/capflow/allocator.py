"""Group formation engine: objective scoring, first-choice seeding, the
redistribution heuristic, conflict detection, what-if previews, manual
moves, and finalization.

The heuristic drains oversubscribed groups into groups of 2..3 members
first (they have the best odds of completing with minor adjustments),
then singletons, then a still-unopened project from the student's own
ballot; a student with no listed target goes to the unassigned pool and
is flagged. Heuristic moves never place a student on a project absent
from their ballot, and every student is moved at most once per cause:
at most one oversubscription drain and at most two non-manual moves in
total, to keep group compositions close to the students' own choices.

Seat profiles are scored, not enforced: an unmatched seat costs
``w_seat`` per member that cannot be legally seated. Conflicts of
interest flag and gate finalization but never veto a manual move; waiving
a flag records the human decision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable

from .ballots import Ballot, alignment_score
from .errors import FinalizeError, InvalidInput, LifecycleError, NotFound
from .intake import Proposal
from .matching import unmatched_count
from .model import Organization, SemesterConfig, Student, WeightSet, normalize_org_name

CAUSE_INITIAL = "initial"
CAUSE_DRAIN = "oversubscribed_drain"
CAUSE_GROUP_CLOSED = "group_closed"
CAUSE_MANUAL = "manual"

_HEURISTIC_CAUSES = (CAUSE_DRAIN, CAUSE_GROUP_CLOSED)


@dataclass(frozen=True)
class Instance:
    """Everything the allocator reads: cohort, approved proposals, ballots,
    and the proposing organizations (for conflict matching)."""

    students: dict[str, Student]
    proposals: dict[str, Proposal]
    ballots: dict[str, Ballot]
    organizations: dict[str, Organization] = field(default_factory=dict)


@dataclass(frozen=True)
class MoveRecord:
    student_id: str
    from_proposal: str | None
    to_proposal: str | None
    cause: str
    objective_delta: float


@dataclass(frozen=True)
class ObjectiveBreakdown:
    rank_cost: float
    size_cost: float
    gpa_spread_cost: float
    interest_cost: float
    seat_cost: float
    total: float


@dataclass(frozen=True)
class ConflictFlag:
    student_id: str
    proposal_id: str
    kind: str  # current_employment | past_employment | family_tie
    matched_org: str
    status: str  # open | waived | blocking


@dataclass(frozen=True)
class Allocation:
    groups: dict[str, frozenset[str]]
    unassigned: frozenset[str]
    provenance: dict[str, tuple[MoveRecord, ...]]
    objective: ObjectiveBreakdown
    conflicts: tuple[ConflictFlag, ...] = ()
    warnings: tuple[str, ...] = ()
    finalized: bool = False

    def group_of(self, student_id: str) -> str | None:
        for pid, members in self.groups.items():
            if student_id in members:
                return pid
        return None


@dataclass(frozen=True)
class MovePreview:
    objective_delta: float
    new_sizes: dict[str, int]
    seat_feasibility_changes: dict[str, dict[str, int]]
    conflict_flags_triggered: tuple[ConflictFlag, ...]


def _size_cost(size: int, cap: int) -> float:
    return float((cap - size) ** 2)


def _pstdev(values: list[float]) -> float:
    if not values:
        return 0.0
    mean = sum(values) / len(values)
    return math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))


def rank_on_ballot(instance: Instance, student_id: str, proposal_id: str | None) -> int | None:
    """0-based rank of the proposal on the student's ballot, None if absent."""
    if proposal_id is None:
        return None
    ballot = instance.ballots.get(student_id)
    if ballot is None:
        return None
    try:
        return ballot.choices.index(proposal_id)
    except ValueError:
        return None


def validate_structure(allocation: Allocation, instance: Instance) -> None:
    """Partition check: every student in exactly one group or unassigned."""
    seen: set[str] = set()
    for pid in allocation.groups:
        if pid not in instance.proposals:
            raise InvalidInput(f"allocation names unknown proposal {pid!r}", proposal_id=pid)
        if not allocation.groups[pid]:
            raise InvalidInput(f"allocation contains empty group {pid!r}", proposal_id=pid)
        for sid in allocation.groups[pid]:
            if sid in seen:
                raise InvalidInput(f"student {sid!r} appears twice", student_id=sid)
            if sid not in instance.students:
                raise InvalidInput(f"allocation names unknown student {sid!r}", student_id=sid)
            seen.add(sid)
    for sid in allocation.unassigned:
        if sid in seen:
            raise InvalidInput(f"student {sid!r} both assigned and unassigned", student_id=sid)
        if sid not in instance.students:
            raise InvalidInput(f"allocation names unknown student {sid!r}", student_id=sid)
        seen.add(sid)
    missing = set(instance.students) - seen
    if missing:
        raise InvalidInput(f"students missing from allocation: {sorted(missing)}", students=sorted(missing))


def objective(
    allocation: Allocation,
    instance: Instance,
    config: SemesterConfig,
    weights: WeightSet | None = None,
) -> ObjectiveBreakdown:
    """Weighted cost of an allocation; 0 is the unimprovable ideal.

    total = w_rank * sum of per-student rank costs (0-based ballot rank,
    or the unlisted penalty for off-ballot and unassigned students)
    + w_size * sum over open groups of (team_size_max - size)^2
    + w_gpa * population std dev of group-mean GPAs on the [0, 1] scale
    + w_interest * sum over assigned students of (1 - alignment)
    + w_seat * sum over groups of members without a legal profile seat.
    """
    validate_structure(allocation, instance)
    w = weights or config.objective_weights
    penalty = w.unlisted_rank_penalty

    rank_cost = 0.0
    interest_cost = 0.0
    size_cost = 0.0
    seat_cost = 0.0
    group_means: list[float] = []
    for pid in sorted(allocation.groups):
        members = sorted(allocation.groups[pid])
        proposal = instance.proposals[pid]
        for sid in members:
            rank = rank_on_ballot(instance, sid, pid)
            rank_cost += float(rank) if rank is not None else penalty
            interest_cost += 1.0 - alignment_score(instance.students[sid], proposal)
        size_cost += _size_cost(len(members), config.team_size_max)
        seat_cost += float(unmatched_count((instance.students[s] for s in members), proposal.seat_profile))
        total_gpa = sum(instance.students[s].gpa for s in members)
        group_means.append(total_gpa / len(members) / config.gpa_scale_max)
    for _sid in sorted(allocation.unassigned):
        rank_cost += penalty
    gpa_spread = _pstdev(group_means)
    total = (
        w.w_rank * rank_cost
        + w.w_size * size_cost
        + w.w_gpa * gpa_spread
        + w.w_interest * interest_cost
        + w.w_seat * seat_cost
    )
    return ObjectiveBreakdown(
        rank_cost=rank_cost,
        size_cost=size_cost,
        gpa_spread_cost=gpa_spread,
        interest_cost=interest_cost,
        seat_cost=seat_cost,
        total=total,
    )


def _warnings(groups: dict[str, Iterable[str]], unassigned: Iterable[str], config: SemesterConfig) -> tuple[str, ...]:
    notes: list[str] = []
    for pid, members in groups.items():
        n = len(set(members))
        if n > config.team_size_max:
            notes.append(f"oversize:{pid}")
        elif 0 < n < config.team_size_min:
            notes.append(f"below_min:{pid}")
    notes.extend(f"unassigned:{sid}" for sid in unassigned)
    return tuple(sorted(notes))


def build_allocation(
    groups: dict[str, set[str]],
    unassigned: set[str],
    provenance: dict[str, list[MoveRecord]],
    instance: Instance,
    config: SemesterConfig,
    conflicts: tuple[ConflictFlag, ...] = (),
    finalized: bool = False,
) -> Allocation:
    frozen_groups = {pid: frozenset(members) for pid, members in groups.items() if members}
    allocation = Allocation(
        groups=frozen_groups,
        unassigned=frozenset(unassigned),
        provenance={sid: tuple(records) for sid, records in provenance.items()},
        objective=ObjectiveBreakdown(0, 0, 0, 0, 0, 0),
        conflicts=conflicts,
        warnings=_warnings(frozen_groups, unassigned, config),
        finalized=finalized,
    )
    return replace(allocation, objective=objective(allocation, instance, config))


def initial_assignment(instance: Instance, config: SemesterConfig) -> Allocation:
    """Seed every balloted student on their first choice; the rest go to
    the unassigned pool. Oversubscription is resolved by redistribute."""
    groups: dict[str, set[str]] = {}
    unassigned: set[str] = set()
    provenance: dict[str, list[MoveRecord]] = {}
    for sid in sorted(instance.students):
        ballot = instance.ballots.get(sid)
        if ballot and ballot.choices:
            first = ballot.choices[0]
            groups.setdefault(first, set()).add(sid)
            provenance[sid] = [MoveRecord(sid, None, first, CAUSE_INITIAL, 0.0)]
        else:
            unassigned.add(sid)
            provenance[sid] = [MoveRecord(sid, None, None, CAUSE_INITIAL, 0.0)]
    return build_allocation(groups, unassigned, provenance, instance, config)


class _Workspace:
    """Mutable scratch state for the redistribution loops, with incremental
    objective deltas so candidate moves are cheap to score."""

    def __init__(self, allocation: Allocation, instance: Instance, config: SemesterConfig) -> None:
        self.instance = instance
        self.config = config
        self.w = config.objective_weights
        self.groups: dict[str, set[str]] = {pid: set(m) for pid, m in allocation.groups.items()}
        self.unassigned: set[str] = set(allocation.unassigned)
        self.provenance: dict[str, list[MoveRecord]] = {
            sid: list(records) for sid, records in allocation.provenance.items()
        }
        self.heuristic_moves: dict[str, int] = {
            sid: sum(1 for r in records if r.cause in _HEURISTIC_CAUSES)
            for sid, records in self.provenance.items()
        }
        self._interest_cache: dict[tuple[str, str], float] = {}
        # float sums must run in sorted order: set iteration order varies
        # with the per-process hash seed and would break byte determinism
        self.gpa_sums: dict[str, float] = {
            pid: sum(instance.students[s].gpa for s in sorted(members)) for pid, members in self.groups.items()
        }
        self.seat_unmatched: dict[str, int] = {
            pid: self._unmatched(members, pid) for pid, members in self.groups.items()
        }
        self.sigma = self._sigma(self._means())

    # -- cost pieces ------------------------------------------------------

    def _unmatched(self, members: Iterable[str], pid: str) -> int:
        profile = self.instance.proposals[pid].seat_profile
        return unmatched_count((self.instance.students[s] for s in members), profile)

    def _means(self) -> dict[str, float]:
        scale = self.config.gpa_scale_max
        return {pid: self.gpa_sums[pid] / len(m) / scale for pid, m in self.groups.items() if m}

    @staticmethod
    def _sigma(means: dict[str, float]) -> float:
        return _pstdev(list(means.values()))

    def _rank_cost(self, sid: str, pid: str | None) -> float:
        rank = rank_on_ballot(self.instance, sid, pid)
        return float(rank) if rank is not None else self.w.unlisted_rank_penalty

    def _interest_cost(self, sid: str, pid: str | None) -> float:
        if pid is None:
            return 0.0
        key = (sid, pid)
        if key not in self._interest_cache:
            self._interest_cache[key] = 1.0 - alignment_score(
                self.instance.students[sid], self.instance.proposals[pid]
            )
        return self._interest_cache[key]

    def delta(self, sid: str, from_pid: str | None, to_pid: str | None) -> float:
        """Exact weighted objective change of moving ``sid``."""
        cap = self.config.team_size_max
        w = self.w
        d_rank = self._rank_cost(sid, to_pid) - self._rank_cost(sid, from_pid)
        d_interest = self._interest_cost(sid, to_pid) - self._interest_cost(sid, from_pid)

        d_size = 0.0
        d_seat = 0.0
        gpa = self.instance.students[sid].gpa
        scale = self.config.gpa_scale_max
        means = self._means()
        if from_pid is not None:
            size = len(self.groups[from_pid])
            d_size += (_size_cost(size - 1, cap) if size > 1 else 0.0) - _size_cost(size, cap)
            remaining = self.groups[from_pid] - {sid}
            d_seat += self._unmatched(remaining, from_pid) - self.seat_unmatched[from_pid]
            if size > 1:
                means[from_pid] = (self.gpa_sums[from_pid] - gpa) / (size - 1) / scale
            else:
                del means[from_pid]
        if to_pid is not None:
            size = len(self.groups.get(to_pid, ()))
            d_size += _size_cost(size + 1, cap) - (_size_cost(size, cap) if size > 0 else 0.0)
            joined = self.groups.get(to_pid, set()) | {sid}
            d_seat += self._unmatched(joined, to_pid) - self.seat_unmatched.get(to_pid, 0)
            means[to_pid] = (self.gpa_sums.get(to_pid, 0.0) + gpa) / (size + 1) / scale
        d_gpa = self._sigma(means) - self.sigma
        return w.w_rank * d_rank + w.w_size * d_size + w.w_gpa * d_gpa + w.w_interest * d_interest + w.w_seat * d_seat

    def execute(self, sid: str, from_pid: str | None, to_pid: str | None, cause: str) -> None:
        moved_delta = self.delta(sid, from_pid, to_pid)
        gpa = self.instance.students[sid].gpa
        if from_pid is None:
            self.unassigned.discard(sid)
        else:
            self.groups[from_pid].discard(sid)
            self.gpa_sums[from_pid] -= gpa
            if self.groups[from_pid]:
                self.seat_unmatched[from_pid] = self._unmatched(self.groups[from_pid], from_pid)
            else:
                del self.groups[from_pid]
                del self.gpa_sums[from_pid]
                del self.seat_unmatched[from_pid]
        if to_pid is None:
            self.unassigned.add(sid)
        else:
            self.groups.setdefault(to_pid, set()).add(sid)
            self.gpa_sums[to_pid] = self.gpa_sums.get(to_pid, 0.0) + gpa
            self.seat_unmatched[to_pid] = self._unmatched(self.groups[to_pid], to_pid)
        self.sigma = self._sigma(self._means())
        self.provenance[sid].append(MoveRecord(sid, from_pid, to_pid, cause, moved_delta))
        if cause in _HEURISTIC_CAUSES:
            self.heuristic_moves[sid] = self.heuristic_moves.get(sid, 0) + 1

    # -- move selection ---------------------------------------------------

    def listed_targets(self, sid: str, exclude: str) -> list[str]:
        ballot = self.instance.ballots.get(sid)
        if ballot is None:
            return []
        return [pid for pid in ballot.choices if pid != exclude]

    def tiered_candidates(self, movers: list[str], source: str) -> list[tuple[str, str | None]]:
        """Candidate (student, target) pairs, restricted to the first
        nonempty tier: groups of 2..max-1, then singletons, then unopened
        listed projects, then the unassigned pool as a last resort."""
        cap = self.config.team_size_max
        tiers: tuple[list[tuple[str, str | None]], ...] = ([], [], [])
        for sid in movers:
            for target in self.listed_targets(sid, source):
                size = len(self.groups.get(target, ()))
                if 2 <= size <= cap - 1:
                    tiers[0].append((sid, target))
                elif size == 1:
                    tiers[1].append((sid, target))
                elif size == 0:
                    tiers[2].append((sid, target))
        for tier in tiers:
            if tier:
                return tier
        return [(sid, None) for sid in movers]

    def best_move(self, candidates: list[tuple[str, str | None]], source: str) -> tuple[str, str | None]:
        return min(
            candidates,
            key=lambda pair: (self.delta(pair[0], source, pair[1]), pair[0], pair[1] or ""),
        )


def redistribute(allocation: Allocation, instance: Instance, config: SemesterConfig) -> Allocation:
    """Drain oversubscribed groups, then close undersized ones.

    Drain loop: while a group exceeds team_size_max, take the largest
    (ties: lowest proposal id), consider only members still on their
    initial placement, and execute the tier-restricted move with the
    smallest objective delta (ties: lowest student id, then target id).

    Closure loop: groups below team_size_min whose members all still have
    a move allowance are closed, their members re-placed one at a time by
    the same rule with cause ``group_closed``. A group that cannot be
    closed without exceeding a member's two-move allowance stays open and
    is flagged, as are students left unassigned.
    """
    ws = _Workspace(allocation, instance, config)
    cap = config.team_size_max
    floor = config.team_size_min

    stuck: set[str] = set()
    while True:
        oversize = [pid for pid, m in ws.groups.items() if len(m) > cap and pid not in stuck]
        if not oversize:
            break
        source = min(oversize, key=lambda pid: (-len(ws.groups[pid]), pid))
        movers = sorted(sid for sid in ws.groups[source] if len(ws.provenance[sid]) == 1)
        if not movers:
            stuck.add(source)
            continue
        sid, target = ws.best_move(ws.tiered_candidates(movers, source), source)
        ws.execute(sid, source, target, CAUSE_DRAIN)

    while True:
        closeable = [
            pid
            for pid, m in ws.groups.items()
            if 0 < len(m) < floor and all(ws.heuristic_moves.get(s, 0) < 2 for s in m)
        ]
        if not closeable:
            break
        source = min(closeable, key=lambda pid: (len(ws.groups[pid]), pid))
        while ws.groups.get(source):
            movers = sorted(ws.groups[source])
            sid, target = ws.best_move(ws.tiered_candidates(movers, source), source)
            ws.execute(sid, source, target, CAUSE_GROUP_CLOSED)

    return build_allocation(ws.groups, ws.unassigned, ws.provenance, instance, config, conflicts=allocation.conflicts)


def detect_conflicts(instance: Instance) -> tuple[ConflictFlag, ...]:
    """Match students' employers and family ties against proposing orgs.

    Organization names are compared after trim/whitespace-collapse/casefold
    normalization. Current employment starts blocking; past employment and
    family ties start open.
    """
    flags: list[ConflictFlag] = []
    for sid in sorted(instance.students):
        student = instance.students[sid]
        current_orgs = {normalize_org_name(e.organization) for e in student.work_history if e.status == "current"}
        past_orgs = {normalize_org_name(e.organization) for e in student.work_history if e.status == "past"}
        family_orgs = {normalize_org_name(name) for name in student.family_ties}
        for pid in sorted(instance.proposals):
            org_id = instance.proposals[pid].form.org_id
            org = instance.organizations.get(org_id)
            if org is None:
                continue
            norm = normalize_org_name(org.name)
            if norm in current_orgs:
                flags.append(ConflictFlag(sid, pid, "current_employment", org.name, "blocking"))
            if norm in past_orgs:
                flags.append(ConflictFlag(sid, pid, "past_employment", org.name, "open"))
            if norm in family_orgs:
                flags.append(ConflictFlag(sid, pid, "family_tie", org.name, "open"))
    flags.sort(key=lambda f: (f.student_id, f.proposal_id, f.kind))
    return tuple(flags)


def allocate(instance: Instance, config: SemesterConfig) -> Allocation:
    """First-choice seeding, redistribution, and conflict detection.

    Deterministic for a fixed instance: all tie-breaks are lexicographic,
    so the configured rng_seed does not influence the default policy (it
    is reserved for explicitly randomized tie-break policies).
    """
    allocation = redistribute(initial_assignment(instance, config), instance, config)
    return replace(allocation, conflicts=detect_conflicts(instance))


def _moved_allocation(
    allocation: Allocation, sid: str, source: str | None, target: str | None, instance: Instance, config: SemesterConfig
) -> Allocation:
    groups = {pid: set(m) for pid, m in allocation.groups.items()}
    unassigned = set(allocation.unassigned)
    if source is None:
        unassigned.discard(sid)
    else:
        groups[source].discard(sid)
        if not groups[source]:
            del groups[source]
    if target is None:
        unassigned.add(sid)
    else:
        groups.setdefault(target, set()).add(sid)
    provenance = {s: list(r) for s, r in allocation.provenance.items()}
    return build_allocation(
        groups, unassigned, provenance, instance, config, conflicts=allocation.conflicts, finalized=allocation.finalized
    )


def _locate(allocation: Allocation, instance: Instance, student_id: str) -> str | None:
    if student_id not in instance.students:
        raise NotFound(f"unknown student {student_id!r}", student_id=student_id)
    source = allocation.group_of(student_id)
    if source is None and student_id not in allocation.unassigned:
        raise NotFound(f"student {student_id!r} not covered by the allocation", student_id=student_id)
    return source


def what_if_move(
    allocation: Allocation,
    student_id: str,
    target: str | None,
    instance: Instance,
    config: SemesterConfig,
) -> MovePreview:
    """Pure preview of a manual move; the allocation is left untouched.

    ``target`` is a proposal id, or None for the unassigned pool.
    """
    source = _locate(allocation, instance, student_id)
    if target is not None and target not in instance.proposals:
        raise NotFound(f"unknown proposal {target!r}", proposal_id=target)
    before = objective(allocation, instance, config)
    moved = _moved_allocation(allocation, student_id, source, target, instance, config)
    after = objective(moved, instance, config)
    affected = [pid for pid in (source, target) if pid is not None]
    new_sizes = {pid: len(moved.groups.get(pid, ())) for pid in affected}
    seat_changes = {}
    for pid in affected:
        seat_changes[pid] = {
            "before": unmatched_count(
                (instance.students[s] for s in allocation.groups.get(pid, ())), instance.proposals[pid].seat_profile
            ),
            "after": unmatched_count(
                (instance.students[s] for s in moved.groups.get(pid, ())), instance.proposals[pid].seat_profile
            ),
        }
    triggered = tuple(
        f for f in allocation.conflicts if f.student_id == student_id and f.proposal_id == target
    )
    return MovePreview(
        objective_delta=after.total - before.total,
        new_sizes=new_sizes,
        seat_feasibility_changes=seat_changes,
        conflict_flags_triggered=triggered,
    )


def apply_move(
    allocation: Allocation,
    student_id: str,
    target: str | None,
    instance: Instance,
    config: SemesterConfig,
) -> Allocation:
    """Execute a manual reassignment.

    Blocking conflicts do not prevent the move; they persist as flags for
    the humans running the process. Oversize results are allowed and
    flagged.
    """
    if allocation.finalized:
        raise LifecycleError("allocation is finalized; no further moves allowed")
    preview = what_if_move(allocation, student_id, target, instance, config)
    source = allocation.group_of(student_id)
    moved = _moved_allocation(allocation, student_id, source, target, instance, config)
    provenance = {s: list(r) for s, r in moved.provenance.items()}
    provenance.setdefault(student_id, []).append(
        MoveRecord(student_id, source, target, CAUSE_MANUAL, preview.objective_delta)
    )
    return replace(moved, provenance={s: tuple(r) for s, r in provenance.items()})


def waive_conflict(
    allocation: Allocation, student_id: str, proposal_id: str, kind: str | None = None
) -> Allocation:
    """Mark matching conflict flags as waived after human review."""
    matched = False
    updated: list[ConflictFlag] = []
    for flag in allocation.conflicts:
        if flag.student_id == student_id and flag.proposal_id == proposal_id and (kind is None or flag.kind == kind):
            updated.append(replace(flag, status="waived"))
            matched = True
        else:
            updated.append(flag)
    if not matched:
        raise NotFound(
            f"no conflict flag for student {student_id!r} on proposal {proposal_id!r}",
            student_id=student_id,
            proposal_id=proposal_id,
        )
    return replace(allocation, conflicts=tuple(updated))


def finalize(allocation: Allocation, config: SemesterConfig) -> Allocation:
    """Freeze the allocation once sizes, coverage, and conflicts are clean.

    Every violated precondition is reported with the offending entities.
    """
    violations: list[dict] = []
    for pid in sorted(allocation.groups):
        n = len(allocation.groups[pid])
        if n > config.team_size_max:
            violations.append({"kind": "oversize_group", "proposal_id": pid, "size": n})
        elif n < config.team_size_min:
            violations.append({"kind": "undersize_group", "proposal_id": pid, "size": n})
    for sid in sorted(allocation.unassigned):
        violations.append({"kind": "unassigned_student", "student_id": sid})
    for flag in allocation.conflicts:
        if flag.status == "waived":
            continue
        if allocation.groups.get(flag.proposal_id, frozenset()) & {flag.student_id}:
            violations.append(
                {
                    "kind": "conflict_flag",
                    "student_id": flag.student_id,
                    "proposal_id": flag.proposal_id,
                    "conflict_kind": flag.kind,
                    "status": flag.status,
                }
            )
    if violations:
        raise FinalizeError(
            f"allocation cannot be finalized: {len(violations)} precondition violation(s)",
            violations=violations,
        )
    return replace(allocation, finalized=True)
