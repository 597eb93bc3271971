// Board projection contract: every number shown comes from a recorded
// service response, byte for byte.

import assert from "node:assert/strict";
import { test } from "node:test";

import { buildBoardView, buildPreviewOverlay } from "../src/board.js";
import { renderBoard, renderOverlay } from "../src/render.js";
import { loadAll } from "./helpers.js";

const data = loadAll();

test("columns cover every approved proposal plus unassigned", () => {
  const view = buildBoardView(data.state, data.allocation, data.metrics, data.demand);
  const approved = Object.values(data.state.proposals)
    .filter((p) => p.status === "approved")
    .map((p) => p.id)
    .sort();
  assert.deepEqual(view.columns.map((c) => c.proposalId), approved);
  const onBoard = view.columns.flatMap((c) => c.cards.map((card) => card.studentId)).concat(
    view.unassigned.map((card) => card.studentId),
  );
  assert.deepEqual([...onBoard].sort(), Object.keys(data.state.students).sort());
});

test("column sizes and seat badges equal the metrics body", () => {
  const view = buildBoardView(data.state, data.allocation, data.metrics, data.demand);
  for (const column of view.columns) {
    const expectedSize = data.metrics.sizes[column.proposalId] ?? 0;
    assert.equal(column.size, expectedSize);
    assert.equal(column.cards.length, data.allocation.groups[column.proposalId]?.length ?? 0);
    const expectedUnmatched = data.metrics.seat_unmatched[column.proposalId] ?? 0;
    assert.equal(column.seatUnmatched, expectedUnmatched);
    assert.equal(column.seatSatisfied, expectedUnmatched === 0);
  }
});

test("cards carry the service's rank and alignment values unchanged", () => {
  const view = buildBoardView(data.state, data.allocation, data.metrics, data.demand);
  for (const column of view.columns) {
    for (const card of column.cards) {
      const rank = data.metrics.assigned_rank[card.studentId];
      assert.equal(card.assignedChoiceRank, rank === null || rank === undefined ? null : rank + 1);
      assert.equal(card.alignment, data.metrics.alignment[card.studentId]);
      const student = data.state.students[card.studentId]!;
      assert.equal(card.gpa, student.gpa);
      assert.equal(card.program, student.program);
    }
  }
});

test("demand stats on columns equal the /demand body", () => {
  const view = buildBoardView(data.state, data.allocation, data.metrics, data.demand);
  const byId = new Map(data.demand.map((row) => [row.proposal_id, row]));
  for (const column of view.columns) {
    assert.deepEqual(column.demand, byId.get(column.proposalId) ?? null);
  }
});

test("footer is exactly the fetched objective breakdown", () => {
  const view = buildBoardView(data.state, data.allocation, data.metrics, data.demand);
  assert.deepEqual(view.footer, data.allocation.objective);
});

test("conflict badges show only non-waived flags of the card's column", () => {
  const view = buildBoardView(data.state, data.allocation, data.metrics, data.demand);
  for (const column of view.columns) {
    for (const card of column.cards) {
      for (const badge of card.conflictBadges) {
        assert.equal(badge.student_id, card.studentId);
        assert.equal(badge.proposal_id, column.proposalId);
        assert.notEqual(badge.status, "waived");
      }
    }
  }
});

test("preview overlay carries the service delta exactly, classed by sign", () => {
  const overlay = buildPreviewOverlay(data.whatif.student_id, data.whatif.target, data.whatif.response);
  assert.equal(overlay.delta, data.whatif.response.objective_delta); // exact
  const expectedTone =
    overlay.delta < 0 ? "improvement" : overlay.delta > 0 ? "regression" : "neutral";
  assert.equal(overlay.tone, expectedTone);
  assert.deepEqual(overlay.newSizes, data.whatif.response.new_sizes);
});

test("renderers embed the fetched numbers", () => {
  const view = buildBoardView(data.state, data.allocation, data.metrics, data.demand);
  const html = renderBoard(view);
  assert.ok(html.includes(view.footer.total.toFixed(3)));
  for (const column of view.columns) {
    assert.ok(html.includes(`data-proposal="${column.proposalId}"`));
  }
  const overlay = buildPreviewOverlay(data.whatif.student_id, data.whatif.target, data.whatif.response);
  const overlayHtml = renderOverlay(overlay);
  assert.ok(overlayHtml.includes(overlay.delta.toFixed(3).replace("-", "")));
  assert.ok(overlayHtml.includes(`class="overlay ${overlay.tone}"`));
});

test("board locks dragging outside the allocation phase, with a gate tooltip", () => {
  const offPhase = { ...data.state, phase: "ballot_window" };
  const view = buildBoardView(offPhase, data.allocation, data.metrics, data.demand);
  assert.equal(view.interactive, false);
  assert.match(view.lockedReason ?? "", /ballot_window/);
  const html = renderBoard(view);
  assert.ok(html.includes('draggable="false"'));
  assert.ok(!html.includes('draggable="true"'));
  assert.ok(html.includes("ballot_window"));
});

test("board locks dragging once finalized", () => {
  const frozen = { ...data.allocation, finalized: true };
  const view = buildBoardView(data.state, frozen, data.metrics, data.demand);
  assert.equal(view.interactive, false);
  assert.match(view.lockedReason ?? "", /finalized/);
});

test("board is interactive during allocation", () => {
  const view = buildBoardView(data.state, data.allocation, data.metrics, data.demand);
  assert.equal(view.interactive, true);
  assert.equal(view.lockedReason, null);
  assert.ok(renderBoard(view).includes('draggable="true"'));
});
