// Typed client for the semester service. All mutations carry the version
// observed at render time in the X-Semester-Version header; a stale value
// comes back as 409/version_conflict and surfaces as VersionConflictError
// so the caller can prompt a refresh instead of silently overwriting
// someone else's work.

import type {
  AllocationBody,
  AllocationMetrics,
  ApiErrorBody,
  BalanceBody,
  DemandStat,
  MovePreview,
  SnapshotState,
} from "./types.js";

export const VERSION_HEADER = "X-Semester-Version";

export type FetchLike = (url: string, init?: RequestInit) => Promise<{
  ok: boolean;
  status: number;
  headers: { get(name: string): string | null };
  json(): Promise<unknown>;
}>;

export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

export class VersionConflictError extends ApiRequestError {}

export class GateError extends ApiRequestError {}

export class ApiClient {
  /** Version from the most recent response; mutations must send the one
   * observed when the board was rendered, not necessarily this one. */
  version: number | null = null;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const header = response.headers.get(VERSION_HEADER);
    if (header !== null) {
      this.version = Number(header);
    }
    const body = (await response.json()) as T | ApiErrorBody;
    if (!response.ok) {
      const error = body as ApiErrorBody;
      if (error.code === "version_conflict") {
        throw new VersionConflictError(response.status, error);
      }
      if (error.code === "phase_gate") {
        throw new GateError(response.status, error);
      }
      throw new ApiRequestError(response.status, error);
    }
    return body as T;
  }

  private mutationInit(version: number, payload?: unknown): RequestInit {
    return {
      method: "POST",
      headers: {
        "Content-Type": "application/json",
        [VERSION_HEADER]: String(version),
      },
      body: payload === undefined ? undefined : JSON.stringify(payload),
    };
  }

  getState(): Promise<SnapshotState> {
    return this.request("/state");
  }

  getBalance(): Promise<BalanceBody> {
    return this.request("/balance");
  }

  getDemand(): Promise<DemandStat[]> {
    return this.request("/demand");
  }

  getAllocation(): Promise<AllocationBody> {
    return this.request("/allocation");
  }

  getMetrics(): Promise<AllocationMetrics> {
    return this.request("/allocation/metrics");
  }

  whatIf(studentId: string, target: string | null): Promise<MovePreview> {
    return this.request("/allocation/whatif", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ student_id: studentId, target: target ?? "unassigned" }),
    });
  }

  commitMove(studentId: string, target: string | null, version: number): Promise<AllocationBody> {
    return this.request(
      "/allocation/moves",
      this.mutationInit(version, { student_id: studentId, target: target ?? "unassigned" }),
    );
  }

  waiveConflict(studentId: string, proposalId: string, version: number, kind?: string): Promise<AllocationBody> {
    return this.request(
      "/conflicts/waive",
      this.mutationInit(version, { student_id: studentId, proposal_id: proposalId, kind }),
    );
  }

  finalize(version: number): Promise<AllocationBody> {
    return this.request("/allocation/finalize", this.mutationInit(version));
  }

  advancePhase(target: string, version: number): Promise<{ phase: string; version: number }> {
    return this.request("/phase/advance", this.mutationInit(version, { target }));
  }
}
