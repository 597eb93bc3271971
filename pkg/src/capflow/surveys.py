"""End-of-project questionnaires and satisfaction aggregates.

Two conventions are computed side by side and labeled: the mean of the
0-10 recommend scores (the program's reporting convention) and the
classic promoter/detractor NPS in [-100, 100].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

from .errors import InvalidInput, NotFound
from .workflow import Phase, PhaseError

if TYPE_CHECKING:
    from .state import Semester


@dataclass(frozen=True)
class PartnerSurvey:
    org_id: str
    proposal_id: str
    recommend_score: int  # 0..10
    progressed_as_expected: bool = True
    progress_comments: str = ""
    communication_comments: str = ""
    team_organization_comments: str = ""
    other_observations: str = ""
    phase_tag: str = "final"  # "midterm" for the in-semester pulse

    def __post_init__(self) -> None:
        if not 0 <= self.recommend_score <= 10:
            raise InvalidInput(
                f"recommend_score {self.recommend_score} outside [0, 10]",
                score=self.recommend_score,
            )


RECOMMEND_LEVELS = ("strongly_recommend", "recommend_with_reservations", "not_recommend")


@dataclass(frozen=True)
class StudentSurvey:
    student_id: str
    proposal_id: str
    recommend_company: str
    top_choice_employer: bool = False
    comments: str = ""
    phase_tag: str = "final"

    def __post_init__(self) -> None:
        if self.recommend_company not in RECOMMEND_LEVELS:
            raise InvalidInput(
                f"unknown recommendation level {self.recommend_company!r}",
                level=self.recommend_company,
            )


def record_survey(semester: "Semester", kind: str, payload: dict) -> str:
    """Store a partner or student survey; a duplicate from the same
    respondent replaces the earlier response."""
    if semester.phase not in (Phase.execution, Phase.surveys_open):
        raise PhaseError(
            f"surveys are not accepted during phase {semester.phase.value!r}",
            action="record_survey",
            phase=semester.phase.value,
        )
    if kind == "partner":
        survey = payload if isinstance(payload, PartnerSurvey) else PartnerSurvey(**payload)
        if survey.org_id not in semester.organizations:
            raise NotFound(f"unknown organization {survey.org_id!r}", org_id=survey.org_id)
        if survey.proposal_id not in semester.proposals:
            raise NotFound(f"unknown proposal {survey.proposal_id!r}", proposal_id=survey.proposal_id)
        key = f"{survey.org_id}:{survey.proposal_id}"
        semester.partner_surveys[key] = survey
    elif kind == "student":
        survey = payload if isinstance(payload, StudentSurvey) else StudentSurvey(**payload)
        if survey.student_id not in semester.students:
            raise NotFound(f"unknown student {survey.student_id!r}", student_id=survey.student_id)
        if survey.proposal_id not in semester.proposals:
            raise NotFound(f"unknown proposal {survey.proposal_id!r}", proposal_id=survey.proposal_id)
        key = survey.student_id
        semester.student_surveys[key] = survey
    else:
        raise InvalidInput(f"unknown survey kind {kind!r}", kind=kind)
    semester.bump()
    return key


@dataclass(frozen=True)
class NpsSummary:
    responses: int
    mean_score: float | None
    promoters: int  # 9-10
    passives: int  # 7-8
    detractors: int  # 0-6
    classic_nps: float | None  # 100 * (promoters - detractors) / responses


def nps_summary(partner_surveys: Iterable[PartnerSurvey]) -> NpsSummary:
    scores = [s.recommend_score for s in partner_surveys]
    if not scores:
        return NpsSummary(0, None, 0, 0, 0, None)
    promoters = sum(1 for s in scores if s >= 9)
    passives = sum(1 for s in scores if 7 <= s <= 8)
    detractors = sum(1 for s in scores if s <= 6)
    return NpsSummary(
        responses=len(scores),
        mean_score=sum(scores) / len(scores),
        promoters=promoters,
        passives=passives,
        detractors=detractors,
        classic_nps=100.0 * (promoters - detractors) / len(scores),
    )


@dataclass(frozen=True)
class RecommendationBreakdown:
    responses: int
    counts: dict[str, int]
    percentages: dict[str, float]  # one decimal place, sums to ~100


def recommendation_breakdown(student_surveys: Iterable[StudentSurvey]) -> RecommendationBreakdown:
    """Counts and one-decimal percentages per recommendation level.

    Percentages use largest-remainder rounding in tenths of a percent, so
    they always sum to exactly 100.0.
    """
    counts = {level: 0 for level in RECOMMEND_LEVELS}
    total = 0
    for s in student_surveys:
        counts[s.recommend_company] += 1
        total += 1
    if total == 0:
        return RecommendationBreakdown(0, counts, {level: 0.0 for level in RECOMMEND_LEVELS})
    tenths = {level: (1000 * counts[level]) // total for level in RECOMMEND_LEVELS}
    remainders = {level: (1000 * counts[level]) % total for level in RECOMMEND_LEVELS}
    for level in sorted(RECOMMEND_LEVELS, key=lambda lv: (-remainders[lv], RECOMMEND_LEVELS.index(lv)))[
        : 1000 - sum(tenths.values())
    ]:
        tenths[level] += 1
    percentages = {level: tenths[level] / 10 for level in RECOMMEND_LEVELS}
    return RecommendationBreakdown(total, counts, percentages)
