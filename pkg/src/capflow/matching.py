"""Seat feasibility: maximum bipartite matching of group members to the
seats of a proposal's profile.

A member is eligible for a seat iff their program is in the seat's allowed
set. Among all maximum matchings the returned assignment is the
lexicographically smallest on (student id, seat index): members in id
order are preferred for seating, and each seated member gets the lowest
seat index compatible with a maximum-size matching.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .intake import SeatProfile
from .model import Student


@dataclass(frozen=True)
class SeatMatch:
    """Outcome of matching members against a profile.

    ``assignment`` maps student id -> seat index (0-based) for seated
    members; ``unmatched`` counts members that cannot be seated legally.
    ``feasible`` holds iff every member got a seat and the group does not
    exceed the seat count.
    """

    assignment: dict[str, int]
    unmatched: int
    feasible: bool


def _max_matching_size(adjacency: Sequence[Sequence[int]], n_right: int) -> int:
    # Kuhn's augmenting-path algorithm; left vertices by index.
    match_right: list[int | None] = [None] * n_right

    def augment(left: int, visited: set[int]) -> bool:
        for seat in adjacency[left]:
            if seat in visited:
                continue
            visited.add(seat)
            occupant = match_right[seat]
            if occupant is None or augment(occupant, visited):
                match_right[seat] = left
                return True
        return False

    size = 0
    for left in range(len(adjacency)):
        if augment(left, set()):
            size += 1
    return size


def lex_max_matching(candidates: Sequence[tuple[str, Sequence[int]]], n_right: int) -> dict[str, int]:
    """Lexicographically smallest maximum matching on (left order, right index).

    ``candidates`` lists (left_id, eligible right indices) in the order that
    defines lexicographic priority. Each left id in turn is fixed to its
    lowest eligible right vertex that still permits a maximum-size matching
    of the remainder; ids that cannot be matched without shrinking the
    matching are skipped.
    """
    adjacency = [sorted(set(elig)) for _, elig in candidates]
    target = _max_matching_size(adjacency, n_right)
    assignment: dict[str, int] = {}
    used: set[int] = set()
    for i, (left_id, _) in enumerate(candidates):
        remaining = adjacency[i + 1 :]
        best_without = len(assignment) + _max_matching_size(
            [[s for s in adj if s not in used] for adj in remaining], n_right
        )
        for seat in adjacency[i]:
            if seat in used:
                continue
            achievable = (
                len(assignment)
                + 1
                + _max_matching_size([[s for s in adj if s not in used and s != seat] for adj in remaining], n_right)
            )
            if achievable == target:
                assignment[left_id] = seat
                used.add(seat)
                break
        else:
            if best_without != target:
                # Cannot happen: skipping is only forced when some maximum
                # matching leaves this vertex unmatched.
                raise AssertionError("matching bookkeeping out of sync")
    return assignment


def seat_feasibility(members: Iterable[Student], profile: SeatProfile | None) -> SeatMatch:
    """Match members to profile seats; feasible iff all members are seated.

    A missing profile imposes no constraint: every member is trivially
    seated (profiles are a guideline, not a hard restriction).
    """
    ordered = sorted(members, key=lambda s: s.id)
    if profile is None:
        return SeatMatch({s.id: i for i, s in enumerate(ordered)}, 0, True)
    candidates = [
        (s.id, [i for i, allowed in enumerate(profile.seats) if s.program in allowed]) for s in ordered
    ]
    assignment = lex_max_matching(candidates, len(profile))
    unmatched = len(ordered) - len(assignment)
    feasible = unmatched == 0 and len(ordered) <= len(profile)
    return SeatMatch(assignment, unmatched, feasible)


@lru_cache(maxsize=262144)
def _unmatched_by_programs(profile: SeatProfile, programs: tuple[str, ...]) -> int:
    # Eligibility depends only on programs, so the count is memoizable per
    # (profile, program multiset); the allocator and oracle hit this hard.
    adjacency = [
        [i for i, allowed in enumerate(profile.seats) if program in allowed] for program in programs
    ]
    return len(programs) - _max_matching_size(adjacency, len(profile.seats))


def unmatched_count(members: Iterable[Student], profile: SeatProfile | None) -> int:
    if profile is None:
        return 0
    programs = tuple(sorted(s.program for s in members))
    return _unmatched_by_programs(profile, programs)
