import { ExplorerState, GapPlan, emptyStateMessage, summaryOf } from "./state.js";
import type { JobSummary, LabeledNode, TransitionItem } from "./types.js";

function esc(text: string): string {
  return text.replace(/[&<>"']/g, (c) => `&#${c.charCodeAt(0)};`);
}

const fmtPct = (v: number) => `${v.toFixed(1)}%`;
const fmtPp = (v: number) => `${v > 0 ? "+" : ""}${v.toFixed(1)} pp`;

export function renderSearchResults(items: JobSummary[]): string {
  if (!items.length) return `<p class="hint">No matching jobs. Try another search.</p>`;
  return `<ul class="results">${items
    .map(
      (j) => `
    <li><button class="pick-job" data-id="${esc(j.id)}">
      <strong>${esc(j.title)}</strong>
      <span class="badge risk-${j.category.toLowerCase()}">${fmtPct(j.rho)}</span>
      <span class="isco">ISCO ${esc(j.isco4)}</span>
    </button></li>`,
    )
    .join("")}</ul>`;
}

function renderPathwayRow(item: TransitionItem, selected: boolean): string {
  const delta = item.delta_rho === null ? "risk-unfiltered" : fmtPp(item.delta_rho);
  return `
  <li class="${selected ? "selected" : ""}">
    <button class="pick-destination" data-target="${esc(item.target)}">
      <strong>${esc(item.target_label)}</strong>
      <span class="delta">${delta}</span>
      <span class="detail">${item.shared_count} shared · transfer ${fmtPct(item.transfer * 100)} · J ${fmtPct(item.jaccard * 100)}</span>
    </button>
  </li>`;
}

export function renderPathways(state: ExplorerState): string {
  if (!state.source) return `<p class="hint">Pick a source job or compose a profile.</p>`;
  if (state.loading && state.pathways === null) return `<p class="hint">Loading…</p>`;
  const empty = emptyStateMessage(state);
  if (empty) return `<div class="empty-state">${esc(empty)}</div>`;
  const items = state.pathways ?? [];
  const summary = summaryOf(state);
  const mean =
    summary.meanDeltaRho === null ? "" : ` · mean Δρ ${fmtPp(summary.meanDeltaRho)}`;
  return `
  <p class="summary">${summary.count} destination${summary.count === 1 ? "" : "s"}${mean}${
    state.riskFiltered ? "" : " · risk-unfiltered"
  }</p>
  <ol class="pathways">${items
    .map((i) => renderPathwayRow(i, i.target === state.selectedDestination))
    .join("")}</ol>`;
}

function nodeChips(nodes: LabeledNode[], cls: string): string {
  if (!nodes.length) return `<span class="none">none</span>`;
  return nodes.map((n) => `<span class="chip ${cls}">${esc(n.label)}</span>`).join("");
}

export function renderGapPlan(plan: GapPlan | null): string {
  if (!plan) return `<p class="hint">Select a destination to see its skill plan.</p>`;
  const headline =
    plan.deltaRho === null ? "" : `<span class="delta">${fmtPp(plan.deltaRho)}</span>`;
  return `
  <h3>${esc(plan.targetLabel)} ${headline}</h3>
  <p class="gap-count">${plan.nGap} skill${plan.nGap === 1 ? "" : "s"} to acquire</p>
  <h4>Activities</h4>
  <dl>
    <dt class="shared">Shared (bridge)</dt><dd>${nodeChips(plan.sharedActivities, "shared")}</dd>
    <dt class="unused">Unused (source only)</dt><dd>${nodeChips(plan.unusedActivities, "unused")}</dd>
    <dt class="gap">Gap (to acquire)</dt><dd>${nodeChips(plan.gapActivities, "gap")}</dd>
  </dl>
  <h4>Tools</h4>
  <dl>
    <dt class="shared">Shared</dt><dd>${nodeChips(plan.sharedTools, "shared")}</dd>
    <dt class="unused">Unused</dt><dd>${nodeChips(plan.unusedTools, "unused")}</dd>
    <dt class="gap">New</dt><dd>${nodeChips(plan.gapTools, "gap")}</dd>
  </dl>`;
}

export function renderBanner(state: ExplorerState): string {
  return state.banner ? `<div class="banner">${esc(state.banner)}</div>` : "";
}

export function renderSourceCard(state: ExplorerState): string {
  const s = state.source;
  if (!s) return "";
  if (s.kind === "job") {
    return `<div class="source-card"><strong>${esc(s.title)}</strong>
      <span>ρ ${fmtPct(s.rho)}</span> · ${s.activities.length} skills</div>`;
  }
  const rho = s.rho === null ? "ρ unknown" : `ρ ${fmtPct(s.rho)}`;
  return `<div class="source-card"><strong>Custom profile</strong>
    <span>${rho}</span> · ${s.activities.length} skills</div>`;
}
