// Dashboard view models. Numbers pass through from /balance, /demand,
// and /allocation untouched; the only work here is sorting and filtering
// fetched rows into display order.

import type { AllocationBody, BalanceBody, ConflictFlag, DemandStat } from "./types.js";

export interface CoverageBar {
  program: string;
  enrolled: number;
  necessaryProjects: number;
  suppliedSeats: number;
  /** 1.0 is the 100% line; null when nobody is enrolled. */
  coverageRatio: number | null;
  aboveLine: boolean;
}

export function coverageBars(balance: BalanceBody): CoverageBar[] {
  const rows = Object.entries(balance.per_program).map(([program, row]) => ({
    program,
    enrolled: row.enrolled_students,
    necessaryProjects: row.necessary_projects,
    suppliedSeats: row.supplied_seats,
    coverageRatio: row.coverage_ratio,
    aboveLine: row.coverage_ratio !== null && row.coverage_ratio >= 1.0,
  }));
  rows.sort((a, b) => a.program.localeCompare(b.program));
  return rows;
}

export function totalCoverage(balance: BalanceBody): CoverageBar {
  const t = balance.total;
  return {
    program: "total",
    enrolled: t.enrolled_students,
    necessaryProjects: t.necessary_projects,
    suppliedSeats: t.supplied_seats,
    coverageRatio: t.coverage_ratio,
    aboveLine: t.coverage_ratio !== null && t.coverage_ratio >= 1.0,
  };
}

export function demandRows(demand: DemandStat[]): DemandStat[] {
  return [...demand].sort(
    (a, b) => b.first_choice_count - a.first_choice_count || a.proposal_id.localeCompare(b.proposal_id),
  );
}

export interface ConflictRow {
  flag: ConflictFlag;
  waivable: boolean;
}

export function conflictPanel(allocation: AllocationBody): ConflictRow[] {
  return allocation.conflicts.map((flag) => ({ flag, waivable: flag.status !== "waived" }));
}

export interface FinalizeState {
  enabled: boolean;
  /** Human-readable precondition violations for the disabled tooltip. */
  violations: string[];
}

export function finalizeState(allocation: AllocationBody): FinalizeState {
  const violations: string[] = [];
  for (const warning of allocation.warnings) {
    const [kind, entity] = warning.split(":", 2);
    if (kind === "oversize") violations.push(`group ${entity} is above the size cap`);
    else if (kind === "below_min") violations.push(`group ${entity} is below the size floor`);
    else if (kind === "unassigned") violations.push(`student ${entity} is unassigned`);
    else violations.push(warning);
  }
  for (const flag of allocation.conflicts) {
    if (flag.status === "waived") continue;
    const members = allocation.groups[flag.proposal_id] ?? [];
    if (members.includes(flag.student_id)) {
      violations.push(
        `conflict: student ${flag.student_id} on ${flag.proposal_id} (${flag.kind}, ${flag.status})`,
      );
    }
  }
  return { enabled: violations.length === 0 && !allocation.finalized, violations };
}
