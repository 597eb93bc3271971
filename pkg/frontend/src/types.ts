// Payload shapes mirroring the service's JSON bodies. The board renders
// these verbatim; it never derives a metric of its own.

export interface StudentRecord {
  id: string;
  name: string;
  program: string;
  gpa: number;
  interests: string[];
  linkedin?: string | null;
}

export interface ProposalRecord {
  id: string;
  status: string;
  form: {
    title: string;
    description: string;
    deliverables: string;
    areas: string[];
    org_id: string;
  };
  seat_profile: { seats: string[][] } | null;
}

export interface BallotRecord {
  student_id: string;
  choices: string[];
  submitted_at: string;
}

export interface SnapshotState {
  students: Record<string, StudentRecord>;
  proposals: Record<string, ProposalRecord>;
  ballots: Record<string, BallotRecord>;
  organizations: Record<string, { id: string; name: string; category: string }>;
  phase: string;
  version: number;
}

export interface ObjectiveBreakdown {
  rank_cost: number;
  size_cost: number;
  gpa_spread_cost: number;
  interest_cost: number;
  seat_cost: number;
  total: number;
}

export interface ConflictFlag {
  student_id: string;
  proposal_id: string;
  kind: string;
  matched_org: string;
  status: string;
}

export interface MoveRecord {
  student_id: string;
  from: string | null;
  to: string | null;
  cause: string;
  objective_delta: number;
}

export interface AllocationBody {
  groups: Record<string, string[]>;
  unassigned: string[];
  provenance: Record<string, MoveRecord[]>;
  objective: ObjectiveBreakdown;
  conflicts: ConflictFlag[];
  warnings: string[];
  finalized: boolean;
}

export interface AllocationMetrics {
  alignment: Record<string, number>;
  assigned_rank: Record<string, number | null>;
  seat_unmatched: Record<string, number>;
  sizes: Record<string, number>;
}

export interface ProgramBalance {
  enrolled_students: number;
  necessary_projects: number;
  supplied_seats: number;
  coverage_ratio: number | null;
}

export interface BalanceBody {
  per_program: Record<string, ProgramBalance>;
  total: ProgramBalance;
}

export interface DemandStat {
  proposal_id: string;
  first_choice_count: number;
  top3_count: number;
  total_mentions: number;
}

export interface MovePreview {
  objective_delta: number;
  new_sizes: Record<string, number>;
  seat_feasibility_changes: Record<string, { before: number; after: number }>;
  conflict_flags_triggered: ConflictFlag[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details: Record<string, unknown>;
}
