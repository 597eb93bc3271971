// Test harness: recorded API bodies (produced by the Python service) and
// a scripted fetch stub, so the contract tests replay real responses.

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import type { FetchLike } from "../src/api.js";

const here = dirname(fileURLToPath(import.meta.url));
// compiled tests live in dist/tests/; fixtures stay in tests/fixtures/
const fixtureDir = join(here, "..", "..", "tests", "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(fixtureDir, name), "utf-8")) as T;
}

export interface StubResponse {
  status?: number;
  body: unknown;
  version?: number;
}

export interface RecordedCall {
  method: string;
  path: string;
  headers: Record<string, string>;
  body: unknown;
}

export class FetchStub {
  calls: RecordedCall[] = [];
  private queues = new Map<string, StubResponse[]>();

  /** Queue a response for "METHOD /path"; repeated calls pop in order,
   * the last response is sticky. */
  on(route: string, ...responses: StubResponse[]): this {
    this.queues.set(route, responses);
    return this;
  }

  get fetch(): FetchLike {
    return async (url, init) => {
      const method = (init?.method ?? "GET").toUpperCase();
      const path = url.replace(/^https?:\/\/[^/]+/, "");
      const key = `${method} ${path}`;
      const queue = this.queues.get(key);
      if (!queue || queue.length === 0) {
        throw new Error(`no stubbed response for ${key}`);
      }
      const spec = queue.length > 1 ? queue.shift()! : queue[0]!;
      this.calls.push({
        method,
        path,
        headers: Object.fromEntries(
          Object.entries((init?.headers ?? {}) as Record<string, string>),
        ),
        body: init?.body ? JSON.parse(String(init.body)) : undefined,
      });
      const status = spec.status ?? 200;
      return {
        ok: status >= 200 && status < 300,
        status,
        headers: {
          get: (name: string) =>
            name.toLowerCase() === "x-semester-version" && spec.version !== undefined
              ? String(spec.version)
              : null,
        },
        json: async () => spec.body,
      };
    };
  }
}

import type {
  AllocationBody,
  AllocationMetrics,
  BalanceBody,
  DemandStat,
  SnapshotState,
  MovePreview,
} from "../src/types.js";

export interface WhatifFixture {
  student_id: string;
  from: string;
  target: string;
  response: MovePreview;
}

export interface MetaFixture {
  initial_version: number;
  moved_version: number;
  student_id: string;
  from: string;
  target: string;
}

export function loadAll() {
  return {
    state: fixture<SnapshotState>("state.json"),
    allocation: fixture<AllocationBody>("allocation.json"),
    metrics: fixture<AllocationMetrics>("metrics.json"),
    balance: fixture<BalanceBody>("balance.json"),
    demand: fixture<DemandStat[]>("demand.json"),
    whatif: fixture<WhatifFixture>("whatif_move.json"),
    allocationAfterMove: fixture<AllocationBody>("allocation_after_move.json"),
    metricsAfterMove: fixture<AllocationMetrics>("metrics_after_move.json"),
    allocationAfterInverse: fixture<AllocationBody>("allocation_after_inverse.json"),
    meta: fixture<MetaFixture>("meta.json"),
  };
}

/** A stub preloaded with the standard read responses at a given version. */
export function readStub(version: number): FetchStub {
  const data = loadAll();
  return new FetchStub()
    .on("GET /state", { body: data.state, version })
    .on("GET /allocation", { body: data.allocation, version })
    .on("GET /allocation/metrics", { body: data.metrics, version })
    .on("GET /balance", { body: data.balance, version })
    .on("GET /demand", { body: data.demand, version });
}
