"""The mutable per-semester aggregate: one object holds everything the
pipeline touches, versioned for optimistic concurrency.

Mutations go through the module operations (intake, ballots, allocator,
...), each of which calls :meth:`Semester.bump`, so the version strictly
increases on every change. The service layer serializes writers; reads
work on snapshots.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .advisors import Advisor
from .allocator import Allocation, Instance
from .ballots import Ballot
from .errors import DuplicateId
from .intake import Proposal
from .model import Organization, SemesterConfig, Student, normalize_org_name
from .surveys import PartnerSurvey, StudentSurvey
from .workflow import Phase


@dataclass
class Semester:
    config: SemesterConfig = field(default_factory=SemesterConfig)
    organizations: dict[str, Organization] = field(default_factory=dict)
    students: dict[str, Student] = field(default_factory=dict)
    proposals: dict[str, Proposal] = field(default_factory=dict)
    ballots: dict[str, Ballot] = field(default_factory=dict)
    allocation: Allocation | None = None
    advisors: dict[str, Advisor] = field(default_factory=dict)
    advisor_assignments: dict[str, str] = field(default_factory=dict)
    partner_surveys: dict[str, PartnerSurvey] = field(default_factory=dict)
    student_surveys: dict[str, StudentSurvey] = field(default_factory=dict)
    phase: Phase = Phase.interest_collection
    version: int = 0

    def bump(self) -> int:
        self.version += 1
        return self.version

    def register_organization(self, org: Organization) -> str:
        if org.id in self.organizations:
            raise DuplicateId(f"organization {org.id!r} already registered", org_id=org.id)
        norm = normalize_org_name(org.name)
        for existing in self.organizations.values():
            if normalize_org_name(existing.name) == norm:
                raise DuplicateId(
                    f"organization name {org.name!r} collides with {existing.id!r}",
                    org_id=org.id,
                    existing=existing.id,
                )
        self.organizations[org.id] = org
        self.bump()
        return org.id

    def register_advisor(self, advisor: Advisor) -> str:
        if advisor.id in self.advisors:
            raise DuplicateId(f"advisor {advisor.id!r} already registered", advisor_id=advisor.id)
        self.advisors[advisor.id] = advisor
        self.bump()
        return advisor.id

    def next_proposal_id(self) -> str:
        i = len(self.proposals) + 1
        while f"p{i:03d}" in self.proposals:
            i += 1
        return f"p{i:03d}"

    def instance(self) -> Instance:
        """The allocator's view: approved proposals only."""
        approved = {pid: p for pid, p in self.proposals.items() if p.status == "approved"}
        return Instance(
            students=dict(self.students),
            proposals=approved,
            ballots=dict(self.ballots),
            organizations=dict(self.organizations),
        )
