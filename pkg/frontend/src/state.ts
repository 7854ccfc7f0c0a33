import type { JobDetail, LabeledNode, TransitionItem, TransitionsResponse } from "./types.js";

export const TAU_MIN = 1;
export const TAU_MAX = 8;
export const PHI_MIN = 0.1;
export const PHI_MAX = 1.0;
export const PHI_STEP = 0.05;

export type SourceSelection =
  | { kind: "job"; id: string; title: string; rho: number; activities: string[]; tools: string[] }
  | { kind: "profile"; activities: string[]; rho: number | null };

export interface GapPlan {
  target: string;
  targetLabel: string;
  deltaRho: number | null;
  nGap: number;
  sharedActivities: LabeledNode[];
  unusedActivities: LabeledNode[];
  gapActivities: LabeledNode[];
  sharedTools: LabeledNode[];
  unusedTools: LabeledNode[];
  gapTools: LabeledNode[];
}

export interface ExplorerState {
  source: SourceSelection | null;
  tau: number;
  phi: number;
  pathways: TransitionItem[] | null;
  pathwayTotal: number;      // the service's count, displayed verbatim
  riskFiltered: boolean;
  selectedDestination: string | null; // invariant: member of pathways
  gapPlan: GapPlan | null;
  loading: boolean;
  banner: string | null; // service-unreachable / validation message
}

export function initialState(): ExplorerState {
  return {
    source: null,
    tau: 3,
    phi: 0.5,
    pathways: null,
    pathwayTotal: 0,
    riskFiltered: true,
    selectedDestination: null,
    gapPlan: null,
    loading: false,
    banner: null,
  };
}

export function clampTau(tau: number): number {
  return Math.min(TAU_MAX, Math.max(TAU_MIN, Math.round(tau)));
}

/** Snap to the 0.05 slider grid inside [0.1, 1.0]. */
export function snapPhi(phi: number): number {
  const snapped = Math.round(phi / PHI_STEP) * PHI_STEP;
  return Number(Math.min(PHI_MAX, Math.max(PHI_MIN, snapped)).toFixed(2));
}

export function withSource(state: ExplorerState, source: SourceSelection): ExplorerState {
  return {
    ...state,
    source,
    pathways: null,
    pathwayTotal: 0,
    selectedDestination: null,
    gapPlan: null,
    banner: null,
  };
}

export function withThresholds(state: ExplorerState, tau: number, phi: number): ExplorerState {
  return { ...state, tau: clampTau(tau), phi: snapPhi(phi) };
}

export function withPathways(state: ExplorerState, resp: TransitionsResponse): ExplorerState {
  const stillListed =
    state.selectedDestination !== null &&
    resp.items.some((i) => i.target === state.selectedDestination);
  return {
    ...state,
    pathways: resp.items,
    pathwayTotal: resp.total,
    riskFiltered: resp.risk_filtered,
    selectedDestination: stillListed ? state.selectedDestination : null,
    gapPlan: stillListed ? state.gapPlan : null,
    loading: false,
    banner: null,
  };
}

export function withDestination(state: ExplorerState, target: string | null): ExplorerState {
  if (target === null) {
    return { ...state, selectedDestination: null, gapPlan: null };
  }
  if (!state.pathways || !state.pathways.some((i) => i.target === target)) {
    return state; // destination must come from the fetched list
  }
  return { ...state, selectedDestination: target };
}

export function withBanner(state: ExplorerState, banner: string): ExplorerState {
  return { ...state, banner, loading: false };
}

export interface Summary {
  count: number;
  meanDeltaRho: number | null;
}

/**
 * Count is the service's own total. The mean is the only client-side
 * arithmetic in the UI: an average over the delta_rho values the service
 * returned, shown next to the list it summarizes.
 */
export function summaryOf(state: ExplorerState): Summary {
  const items = state.pathways ?? [];
  const deltas = items
    .map((i) => i.delta_rho)
    .filter((d): d is number => d !== null);
  const mean = deltas.length
    ? deltas.reduce((acc, d) => acc + d, 0) / deltas.length
    : null;
  return { count: state.pathways ? state.pathwayTotal : 0, meanDeltaRho: mean };
}

/** Empty-state hint once a source is selected and the service returned nothing. */
export function emptyStateMessage(state: ExplorerState): string | null {
  if (!state.source || state.pathways === null || state.pathways.length > 0) {
    return null;
  }
  const degree = state.source.activities.length;
  if (state.tau > degree) {
    return `No destinations: the shared-skill floor (τ=${state.tau}) exceeds this profile's ${degree} skills. Substantial reskilling would be needed.`;
  }
  return "No destinations satisfy the current thresholds. Loosen τ/φ or plan for substantial reskilling.";
}

function labelOf(nodes: LabeledNode[], id: string): string {
  return nodes.find((n) => n.id === id)?.label ?? id;
}

/**
 * Three-way decomposition for the inspected destination. Sets are derived
 * from service payloads only: the pathway's shared/gap lists plus the two
 * jobs' activity/tool lists.
 */
export function buildGapPlan(
  source: SourceSelection,
  sourceToolIds: string[],
  target: JobDetail,
  item: TransitionItem,
): GapPlan {
  const shared = new Set(item.shared);
  const unusedActivityIds = source.activities.filter((a) => !shared.has(a));
  const targetToolIds = new Set(target.tools.map((t) => t.id));
  const sourceTools = new Set(sourceToolIds);
  return {
    target: item.target,
    targetLabel: item.target_label,
    deltaRho: item.delta_rho,
    nGap: item.gap.length,
    sharedActivities: item.shared.map((a) => ({ id: a, label: labelOf(target.activities, a) })),
    unusedActivities: unusedActivityIds.map((a) => ({ id: a, label: a })),
    gapActivities: item.gap,
    sharedTools: target.tools.filter((t) => sourceTools.has(t.id)),
    unusedTools: sourceToolIds.filter((t) => !targetToolIds.has(t)).map((t) => ({ id: t, label: t })),
    gapTools: target.tools.filter((t) => !sourceTools.has(t.id)),
  };
}
