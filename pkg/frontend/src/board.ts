// Board projection: columns, cards, and footer are lookups into fetched
// bodies (state, allocation, metrics, demand). No metric is computed
// here; sizes, ranks, alignment, seat mismatches, and the objective all
// arrive from the service.

import type {
  AllocationBody,
  AllocationMetrics,
  ConflictFlag,
  DemandStat,
  ObjectiveBreakdown,
  SnapshotState,
} from "./types.js";

export interface CardView {
  studentId: string;
  name: string;
  program: string;
  gpa: number;
  /** 1-based rank of this column on the student's ballot; null = off-ballot. */
  assignedChoiceRank: number | null;
  alignment: number | null;
  conflictBadges: ConflictFlag[];
}

export interface ColumnView {
  proposalId: string;
  title: string;
  size: number;
  seatUnmatched: number;
  seatSatisfied: boolean;
  demand: DemandStat | null;
  cards: CardView[];
}

export interface BoardView {
  columns: ColumnView[];
  unassigned: CardView[];
  footer: ObjectiveBreakdown;
  finalized: boolean;
  phase: string;
  version: number;
  /** Dragging is enabled only while the phase gate allows moves. */
  interactive: boolean;
  /** Tooltip shown on locked cards. */
  lockedReason: string | null;
}

function card(
  sid: string,
  pid: string | null,
  state: SnapshotState,
  allocation: AllocationBody,
  metrics: AllocationMetrics,
): CardView {
  const student = state.students[sid];
  const rank = pid === null ? null : (metrics.assigned_rank[sid] ?? null);
  return {
    studentId: sid,
    name: student?.name ?? sid,
    program: student?.program ?? "?",
    gpa: student?.gpa ?? 0,
    assignedChoiceRank: rank === null ? null : rank + 1,
    alignment: pid === null ? null : (metrics.alignment[sid] ?? null),
    conflictBadges: allocation.conflicts.filter(
      (flag) => flag.student_id === sid && (pid === null || flag.proposal_id === pid) && flag.status !== "waived",
    ),
  };
}

export function buildBoardView(
  state: SnapshotState,
  allocation: AllocationBody,
  metrics: AllocationMetrics,
  demand: DemandStat[],
): BoardView {
  const demandById = new Map(demand.map((row) => [row.proposal_id, row]));
  const approved = Object.keys(state.proposals)
    .filter((pid) => state.proposals[pid]?.status === "approved")
    .sort();
  const columns: ColumnView[] = approved.map((pid) => {
    const members = [...(allocation.groups[pid] ?? [])].sort();
    const unmatched = metrics.seat_unmatched[pid] ?? 0;
    return {
      proposalId: pid,
      title: state.proposals[pid]?.form.title ?? pid,
      size: metrics.sizes[pid] ?? 0,
      seatUnmatched: unmatched,
      seatSatisfied: unmatched === 0,
      demand: demandById.get(pid) ?? null,
      cards: members.map((sid) => card(sid, pid, state, allocation, metrics)),
    };
  });
  const interactive = state.phase === "allocation" && !allocation.finalized;
  return {
    columns,
    unassigned: [...allocation.unassigned].sort().map((sid) => card(sid, null, state, allocation, metrics)),
    footer: allocation.objective,
    finalized: allocation.finalized,
    phase: state.phase,
    version: state.version,
    interactive,
    lockedReason: interactive
      ? null
      : allocation.finalized
        ? "allocation is finalized"
        : `moves are gated off during phase ${state.phase}`,
  };
}

export interface PreviewOverlay {
  studentId: string;
  target: string | null;
  delta: number;
  /** improvement | regression | neutral, for green/red/grey styling. */
  tone: "improvement" | "regression" | "neutral";
  newSizes: Record<string, number>;
  seatChanges: Record<string, { before: number; after: number }>;
  triggeredConflicts: ConflictFlag[];
}

export function buildPreviewOverlay(
  studentId: string,
  target: string | null,
  preview: {
    objective_delta: number;
    new_sizes: Record<string, number>;
    seat_feasibility_changes: Record<string, { before: number; after: number }>;
    conflict_flags_triggered: ConflictFlag[];
  },
): PreviewOverlay {
  const delta = preview.objective_delta;
  return {
    studentId,
    target,
    delta,
    tone: delta < 0 ? "improvement" : delta > 0 ? "regression" : "neutral",
    newSizes: preview.new_sizes,
    seatChanges: preview.seat_feasibility_changes,
    triggeredConflicts: preview.conflict_flags_triggered,
  };
}
