// Browser bootstrap: fetch, render, and wire drag-and-drop with the
// mandatory preview-then-commit flow. Everything testable lives in the
// imported modules; this file only touches the DOM.

import { ApiClient } from "./api.js";
import { BoardApp } from "./app.js";
import {
  renderBoard,
  renderConflictPanel,
  renderConflictPrompt,
  renderCoverage,
  renderDemand,
  renderFinalizeButton,
  renderOverlay,
  renderStaleBanner,
} from "./render.js";

const api = new ApiClient("");
const app = new BoardApp(api);

function drawAll(): void {
  const root = document.getElementById("root");
  if (!root) return;
  const pieces: string[] = [];
  if (app.staleBanner) pieces.push(renderStaleBanner());
  if (app.conflictPrompt) pieces.push(renderConflictPrompt(app.conflictPrompt));
  pieces.push(`<section class="dashboards">`);
  pieces.push(renderCoverage(app.coverage, app.coverageTotal));
  pieces.push(renderDemand(app.demandChart));
  pieces.push(renderConflictPanel(app.conflicts));
  pieces.push(renderFinalizeButton(app.finalize));
  pieces.push(`</section>`);
  pieces.push(renderBoard(app.board));
  root.innerHTML = pieces.join("");
  wire(root);
}

function wire(root: HTMLElement): void {
  for (const card of root.querySelectorAll<HTMLElement>(".card")) {
    card.addEventListener("dragstart", (event) => {
      const sid = card.dataset.student;
      if (sid && event instanceof DragEvent) event.dataTransfer?.setData("text/plain", sid);
    });
  }
  for (const column of root.querySelectorAll<HTMLElement>(".column")) {
    column.addEventListener("dragover", (event) => event.preventDefault());
    column.addEventListener("drop", (event) => {
      event.preventDefault();
      if (!(event instanceof DragEvent)) return;
      const sid = event.dataTransfer?.getData("text/plain");
      const pid = column.dataset.proposal;
      if (!sid || !pid) return;
      const target = pid === "unassigned" ? null : pid;
      void app.previewMove(sid, target).then((overlay) => {
        const holder = document.createElement("div");
        holder.innerHTML = renderOverlay(overlay);
        holder.querySelector('[data-action="confirm"]')?.addEventListener("click", () => {
          void app.commitPending().then(() => drawAll());
        });
        holder.querySelector('[data-action="cancel"]')?.addEventListener("click", () => {
          app.cancelPreview();
          holder.remove();
        });
        column.appendChild(holder);
      });
    });
  }
  root.querySelector('[data-action="refresh"]')?.addEventListener("click", () => {
    void app.refresh().then(() => drawAll());
  });
  root.querySelector('[data-action="finalize"]')?.addEventListener("click", () => {
    void app.finalizeGroups().then(() => drawAll());
  });
  for (const button of root.querySelectorAll<HTMLElement>('[data-action="waive"]')) {
    button.addEventListener("click", () => {
      const sid = button.dataset.student;
      const pid = button.dataset.proposal;
      if (sid && pid) void app.waive(sid, pid).then(() => drawAll());
    });
  }
}

void app.refresh().then(() => drawAll());
export { drawAll };
