// Controller flow: preview-then-commit against recorded responses,
// optimistic-concurrency conflicts, involution, and the stale banner.

import assert from "node:assert/strict";
import { test } from "node:test";

import { ApiClient, VERSION_HEADER } from "../src/api.js";
import { BoardApp } from "../src/app.js";
import { FetchStub, loadAll, readStub } from "./helpers.js";

const data = loadAll();

function appWith(stub: FetchStub): BoardApp {
  return new BoardApp(new ApiClient("", stub.fetch));
}

test("refresh loads every surface from the service", async () => {
  const app = appWith(readStub(data.meta.initial_version));
  await app.refresh();
  assert.deepEqual(app.board.footer, data.allocation.objective);
  assert.equal(app.coverage.length, Object.keys(data.balance.per_program).length);
  assert.equal(app.demandChart.length, data.demand.length);
});

test("previewMove returns the service delta and arms the commit", async () => {
  const stub = readStub(data.meta.initial_version).on("POST /allocation/whatif", {
    body: data.whatif.response,
    version: data.meta.initial_version,
  });
  const app = appWith(stub);
  await app.refresh();
  const overlay = await app.previewMove(data.whatif.student_id, data.whatif.target);
  assert.equal(overlay.delta, data.whatif.response.objective_delta); // exact equality
  assert.ok(app.pendingPreview);
  const call = stub.calls.at(-1)!;
  assert.equal(call.path, "/allocation/whatif");
  assert.deepEqual(call.body, { student_id: data.whatif.student_id, target: data.whatif.target });
});

test("commit without a preview is refused", async () => {
  const app = appWith(readStub(data.meta.initial_version));
  await app.refresh();
  await assert.rejects(() => app.commitPending(), /no previewed move/);
});

test("commitPending sends the render-time version and re-renders from the response", async () => {
  const stub = readStub(data.meta.initial_version)
    .on("POST /allocation/whatif", { body: data.whatif.response, version: data.meta.initial_version })
    .on("POST /allocation/moves", { body: data.allocationAfterMove, version: data.meta.moved_version })
    .on("GET /allocation/metrics", { body: data.metricsAfterMove, version: data.meta.moved_version });
  const app = appWith(stub);
  await app.refresh();
  await app.previewMove(data.whatif.student_id, data.whatif.target);
  const board = await app.commitPending();
  const commit = stub.calls.find((c) => c.path === "/allocation/moves")!;
  assert.equal(commit.headers[VERSION_HEADER], String(data.meta.initial_version));
  assert.deepEqual(board.footer, data.allocationAfterMove.objective);
  const targetColumn = board.columns.find((c) => c.proposalId === data.whatif.target)!;
  assert.ok(targetColumn.cards.some((c) => c.studentId === data.whatif.student_id));
  assert.equal(app.pendingPreview, null);
});

test("commit then inverse commit restores the original grouping", async () => {
  const stub = readStub(data.meta.initial_version)
    .on(
      "POST /allocation/whatif",
      { body: data.whatif.response, version: data.meta.initial_version },
      { body: { ...data.whatif.response, objective_delta: -data.whatif.response.objective_delta }, version: data.meta.moved_version },
    )
    .on(
      "POST /allocation/moves",
      { body: data.allocationAfterMove, version: data.meta.moved_version },
      { body: data.allocationAfterInverse, version: data.meta.moved_version + 1 },
    )
    .on(
      "GET /allocation/metrics",
      { body: data.metrics, version: data.meta.initial_version },
      { body: data.metricsAfterMove, version: data.meta.moved_version },
      { body: data.metrics, version: data.meta.moved_version + 1 },
    );
  const app = appWith(stub);
  await app.refresh();
  await app.previewMove(data.whatif.student_id, data.whatif.target);
  await app.commitPending();
  await app.previewMove(data.whatif.student_id, data.whatif.from);
  const board = await app.commitPending();
  const groups: Record<string, string[]> = {};
  for (const column of board.columns) {
    if (column.cards.length > 0) {
      groups[column.proposalId] = column.cards.map((c) => c.studentId).sort();
    }
  }
  assert.deepEqual(groups, data.allocation.groups);
});

test("stale-version commit surfaces the conflict prompt and keeps the board", async () => {
  const stub = readStub(data.meta.initial_version)
    .on("POST /allocation/whatif", { body: data.whatif.response, version: data.meta.initial_version })
    .on("POST /allocation/moves", {
      status: 409,
      body: {
        code: "version_conflict",
        message: "stale version",
        details: { seen: data.meta.initial_version, version: data.meta.moved_version },
      },
      version: data.meta.moved_version,
    });
  const app = appWith(stub);
  await app.refresh();
  const before = app.board;
  await app.previewMove(data.whatif.student_id, data.whatif.target);
  const after = await app.commitPending();
  assert.ok(app.conflictPrompt, "conflict prompt must be set");
  assert.match(app.conflictPrompt!, /[Rr]efresh/);
  assert.deepEqual(after, before); // nothing moved locally
  assert.equal(app.pendingPreview, null);
});

test("refresh clears the conflict prompt", async () => {
  const stub = readStub(data.meta.initial_version)
    .on("POST /allocation/whatif", { body: data.whatif.response, version: data.meta.initial_version })
    .on("POST /allocation/moves", {
      status: 409,
      body: { code: "version_conflict", message: "stale", details: {} },
    });
  const app = appWith(stub);
  await app.refresh();
  await app.previewMove(data.whatif.student_id, data.whatif.target);
  await app.commitPending();
  assert.ok(app.conflictPrompt);
  await app.refresh();
  assert.equal(app.conflictPrompt, null);
});

test("waive posts the version header and swaps in the response", async () => {
  const flag = data.allocation.conflicts[0];
  if (!flag) {
    assert.fail("fixture should contain conflicts");
  }
  const waived = {
    ...data.allocation,
    conflicts: data.allocation.conflicts.map((f) =>
      f.student_id === flag.student_id && f.proposal_id === flag.proposal_id ? { ...f, status: "waived" } : f,
    ),
  };
  const stub = readStub(data.meta.initial_version).on("POST /conflicts/waive", {
    body: waived,
    version: data.meta.initial_version + 1,
  });
  const app = appWith(stub);
  await app.refresh();
  await app.waive(flag.student_id, flag.proposal_id);
  const call = stub.calls.at(-1)!;
  assert.equal(call.headers[VERSION_HEADER], String(data.meta.initial_version));
  const stillOpen = app.conflicts.filter(
    (row) =>
      row.flag.student_id === flag.student_id &&
      row.flag.proposal_id === flag.proposal_id &&
      row.flag.status !== "waived",
  );
  assert.equal(stillOpen.length, 0);
});

test("unreachable service flips the stale banner but keeps the cached view", async () => {
  const stub = readStub(data.meta.initial_version);
  let online = true;
  const app = new BoardApp(
    new ApiClient("", (url, init) => {
      if (!online) throw new Error("ECONNREFUSED");
      return stub.fetch(url, init);
    }),
  );
  await app.refresh();
  online = false;
  await app.refresh();
  assert.equal(app.staleBanner, true);
  assert.deepEqual(app.board.footer, data.allocation.objective);
});
