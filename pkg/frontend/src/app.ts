// Board controller: owns the fetched snapshot, enforces the two-step
// preview-then-commit flow, and turns stale-version rejections into a
// refresh prompt instead of a silent overwrite.

import { ApiClient, VersionConflictError } from "./api.js";
import { BoardView, PreviewOverlay, buildBoardView, buildPreviewOverlay } from "./board.js";
import {
  ConflictRow,
  CoverageBar,
  FinalizeState,
  conflictPanel,
  coverageBars,
  demandRows,
  finalizeState,
  totalCoverage,
} from "./dashboards.js";
import type {
  AllocationBody,
  AllocationMetrics,
  BalanceBody,
  DemandStat,
  SnapshotState,
} from "./types.js";

interface LoadedData {
  state: SnapshotState;
  allocation: AllocationBody;
  metrics: AllocationMetrics;
  balance: BalanceBody;
  demand: DemandStat[];
  /** Version observed when this data was rendered; all commits use it. */
  version: number;
}

export class BoardApp {
  private data: LoadedData | null = null;
  private pending: PreviewOverlay | null = null;

  /** Set when a commit lost the optimistic-concurrency race. */
  conflictPrompt: string | null = null;

  /** Set when the service is unreachable and the view is a stale cache. */
  staleBanner = false;

  constructor(private readonly api: ApiClient) {}

  async refresh(): Promise<void> {
    try {
      const state = await this.api.getState();
      const version = this.api.version ?? state.version;
      const [allocation, metrics, balance, demand] = await Promise.all([
        this.api.getAllocation(),
        this.api.getMetrics(),
        this.api.getBalance(),
        this.api.getDemand(),
      ]);
      this.data = { state, allocation, metrics, balance, demand, version };
      this.conflictPrompt = null;
      this.staleBanner = false;
      this.pending = null;
    } catch (error) {
      if (this.data !== null) {
        this.staleBanner = true;
        return;
      }
      throw error;
    }
  }

  private loaded(): LoadedData {
    if (this.data === null) {
      throw new Error("board not loaded; call refresh() first");
    }
    return this.data;
  }

  get board(): BoardView {
    const d = this.loaded();
    return buildBoardView(d.state, d.allocation, d.metrics, d.demand);
  }

  get coverage(): CoverageBar[] {
    return coverageBars(this.loaded().balance);
  }

  get coverageTotal(): CoverageBar {
    return totalCoverage(this.loaded().balance);
  }

  get demandChart(): DemandStat[] {
    return demandRows(this.loaded().demand);
  }

  get conflicts(): ConflictRow[] {
    return conflictPanel(this.loaded().allocation);
  }

  get finalize(): FinalizeState {
    return finalizeState(this.loaded().allocation);
  }

  get pendingPreview(): PreviewOverlay | null {
    return this.pending;
  }

  /** Step one of a move: ask the service what would change. */
  async previewMove(studentId: string, target: string | null): Promise<PreviewOverlay> {
    this.loaded();
    const preview = await this.api.whatIf(studentId, target);
    this.pending = buildPreviewOverlay(studentId, target, preview);
    return this.pending;
  }

  cancelPreview(): void {
    this.pending = null;
  }

  /** Step two: commit the previewed move with the render-time version. */
  async commitPending(): Promise<BoardView> {
    const d = this.loaded();
    const pending = this.pending;
    if (pending === null) {
      throw new Error("no previewed move to commit");
    }
    try {
      const allocation = await this.api.commitMove(pending.studentId, pending.target, d.version);
      d.allocation = allocation;
      d.version = this.api.version ?? d.version;
      d.metrics = await this.api.getMetrics();
      this.pending = null;
      return this.board;
    } catch (error) {
      if (error instanceof VersionConflictError) {
        this.conflictPrompt =
          "Someone else changed the allocation. Refresh to load their changes, then retry your move.";
        this.pending = null;
        return this.board;
      }
      throw error;
    }
  }

  async waive(studentId: string, proposalId: string): Promise<void> {
    const d = this.loaded();
    try {
      d.allocation = await this.api.waiveConflict(studentId, proposalId, d.version);
      d.version = this.api.version ?? d.version;
    } catch (error) {
      if (error instanceof VersionConflictError) {
        this.conflictPrompt = "Conflict list changed under you. Refresh and retry.";
        return;
      }
      throw error;
    }
  }

  async finalizeGroups(): Promise<void> {
    const d = this.loaded();
    d.allocation = await this.api.finalize(d.version);
    d.version = this.api.version ?? d.version;
  }
}
