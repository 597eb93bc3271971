// HTML renderers for the board and dashboards. Pure string builders so
// they are testable without a DOM; main.ts injects the output.

import type { BoardView, CardView, ColumnView, PreviewOverlay } from "./board.js";
import type { ConflictRow, CoverageBar, FinalizeState } from "./dashboards.js";
import type { DemandStat } from "./types.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

function fmt(value: number, digits = 2): string {
  return value.toFixed(digits);
}

export function renderCard(card: CardView, interactive = true, lockedReason: string | null = null): string {
  const badges: string[] = [];
  if (card.assignedChoiceRank !== null) {
    badges.push(`<span class="badge rank">#${card.assignedChoiceRank}</span>`);
  } else if (card.alignment !== null) {
    badges.push(`<span class="badge rank off-ballot">off-ballot</span>`);
  }
  if (card.alignment !== null) {
    badges.push(`<span class="badge align">${fmt(card.alignment)}</span>`);
  }
  for (const flag of card.conflictBadges) {
    badges.push(`<span class="badge conflict ${esc(flag.status)}" title="${esc(flag.kind)}: ${esc(flag.matched_org)}">!</span>`);
  }
  const lock = interactive ? "" : ` title="${esc(lockedReason ?? "moves are locked")}"`;
  return (
    `<div class="card${interactive ? "" : " locked"}" draggable="${interactive}"${lock} data-student="${esc(card.studentId)}">` +
    `<span class="name">${esc(card.name)}</span>` +
    `<span class="meta">${esc(card.program)} · GPA ${fmt(card.gpa, 1)}</span>` +
    badges.join("") +
    `</div>`
  );
}

export function renderColumn(column: ColumnView, interactive = true, lockedReason: string | null = null): string {
  const seat = column.seatSatisfied
    ? `<span class="badge seat ok">seats ok</span>`
    : `<span class="badge seat bad">${column.seatUnmatched} unseated</span>`;
  const demand = column.demand
    ? `<span class="demand" title="first / top3 / mentions">${column.demand.first_choice_count}/${column.demand.top3_count}/${column.demand.total_mentions}</span>`
    : "";
  return (
    `<section class="column" data-proposal="${esc(column.proposalId)}">` +
    `<header><h3>${esc(column.title)}</h3>` +
    `<span class="size">${column.size}</span>${seat}${demand}</header>` +
    column.cards.map((card) => renderCard(card, interactive, lockedReason)).join("") +
    `</section>`
  );
}

export function renderBoard(view: BoardView): string {
  const unassigned =
    `<section class="column unassigned" data-proposal="unassigned">` +
    `<header><h3>Unassigned</h3><span class="size">${view.unassigned.length}</span></header>` +
    view.unassigned.map((card) => renderCard(card, view.interactive, view.lockedReason)).join("") +
    `</section>`;
  const f = view.footer;
  const footer =
    `<footer class="objective">` +
    `total <b>${fmt(f.total, 3)}</b>` +
    ` · rank ${fmt(f.rank_cost, 1)} · size ${fmt(f.size_cost, 1)} · gpa ${fmt(f.gpa_spread_cost, 3)}` +
    ` · interest ${fmt(f.interest_cost, 2)} · seats ${fmt(f.seat_cost, 0)}` +
    `</footer>`;
  return (
    `<div class="board" data-version="${view.version}">` +
    view.columns.map((column) => renderColumn(column, view.interactive, view.lockedReason)).join("") +
    unassigned +
    footer +
    `</div>`
  );
}

export function renderOverlay(overlay: PreviewOverlay): string {
  const sign = overlay.delta > 0 ? "+" : "";
  const sizes = Object.entries(overlay.newSizes)
    .map(([pid, size]) => `${esc(pid)}&rarr;${size}`)
    .join(", ");
  const conflicts = overlay.triggeredConflicts
    .map((flag) => `<li class="conflict">${esc(flag.kind)} at ${esc(flag.matched_org)} (${esc(flag.status)})</li>`)
    .join("");
  return (
    `<div class="overlay ${overlay.tone}">` +
    `<p class="delta">${sign}${fmt(overlay.delta, 3)}</p>` +
    `<p class="sizes">${sizes}</p>` +
    (conflicts ? `<ul class="conflicts">${conflicts}</ul>` : "") +
    `<button data-action="confirm">Commit</button><button data-action="cancel">Cancel</button>` +
    `</div>`
  );
}

export function renderCoverage(bars: CoverageBar[], total: CoverageBar): string {
  const rows = [...bars, total]
    .map((bar) => {
      const ratio = bar.coverageRatio;
      const width = ratio === null ? 0 : Math.min(ratio, 2.0) * 50; // 100% line sits at 50% width
      const label = ratio === null ? "n/a" : `${(ratio * 100).toFixed(0)}%`;
      return (
        `<div class="bar-row${bar.program === "total" ? " total" : ""}" data-program="${esc(bar.program)}">` +
        `<span class="label">${esc(bar.program)}</span>` +
        `<div class="bar ${bar.aboveLine ? "above" : "below"}" style="width:${width.toFixed(1)}%"></div>` +
        `<span class="value">${label} (${bar.suppliedSeats} seats / ${bar.enrolled} students, needs ${bar.necessaryProjects})</span>` +
        `</div>`
      );
    })
    .join("");
  return `<div class="coverage"><div class="line" style="left:50%"></div>${rows}</div>`;
}

export function renderDemand(rows: DemandStat[]): string {
  const max = Math.max(1, ...rows.map((r) => r.first_choice_count));
  return (
    `<div class="demand-chart">` +
    rows
      .map(
        (row) =>
          `<div class="bar-row" data-proposal="${esc(row.proposal_id)}">` +
          `<span class="label">${esc(row.proposal_id)}</span>` +
          `<div class="bar" style="width:${((row.first_choice_count / max) * 100).toFixed(1)}%"></div>` +
          `<span class="value">${row.first_choice_count} first · ${row.top3_count} top3 · ${row.total_mentions} mentions</span>` +
          `</div>`,
      )
      .join("") +
    `</div>`
  );
}

export function renderConflictPanel(rows: ConflictRow[]): string {
  if (rows.length === 0) {
    return `<div class="conflict-panel empty">No conflicts detected</div>`;
  }
  return (
    `<div class="conflict-panel"><ul>` +
    rows
      .map(
        ({ flag, waivable }) =>
          `<li class="${esc(flag.status)}">` +
          `${esc(flag.student_id)} × ${esc(flag.proposal_id)}: ${esc(flag.kind)} at ${esc(flag.matched_org)} [${esc(flag.status)}]` +
          (waivable
            ? ` <button data-action="waive" data-student="${esc(flag.student_id)}" data-proposal="${esc(flag.proposal_id)}">waive</button>`
            : "") +
          `</li>`,
      )
      .join("") +
    `</ul></div>`
  );
}

export function renderFinalizeButton(state: FinalizeState): string {
  const tooltip = state.violations.map(esc).join("&#10;");
  return (
    `<button class="finalize" data-action="finalize"` +
    (state.enabled ? "" : ` disabled title="${tooltip}"`) +
    `>Finalize groups</button>`
  );
}

export function renderConflictPrompt(message: string): string {
  return (
    `<div class="version-conflict">` +
    `<p>${esc(message)}</p>` +
    `<button data-action="refresh">Refresh</button>` +
    `</div>`
  );
}

export function renderStaleBanner(): string {
  return `<div class="stale-banner">Service unreachable: showing the last loaded state (read-only)</div>`;
}
