/** Wire types mirroring the query service's JSON payloads. */

export interface JobSummary {
  id: string;
  title: string;
  isco4: string;
  rho: number;
  category: "High" | "Medium" | "Low";
}

export interface SearchResponse {
  total: number;
  items: JobSummary[];
}

export interface LabeledNode {
  id: string;
  label: string;
}

export interface JobDetail extends JobSummary {
  employer: string;
  activities: LabeledNode[];
  tools: LabeledNode[];
}

export interface TransitionItem {
  target: string;
  target_label: string;
  rho_target: number;
  delta_rho: number | null;
  shared: string[];
  shared_count: number;
  transfer: number;
  jaccard: number;
  gap: LabeledNode[];
}

export interface TransitionsResponse {
  tau: number;
  phi: number | null;
  risk_filtered: boolean;
  total: number;
  items: TransitionItem[];
  source?: string;
}

export interface SensitivityRow {
  config: string;
  tau: number;
  phi: number | null;
  n_pathways: number;
  mean_shared: number | null;
  mean_transfer: number | null;
  unique_sources: number;
  coverage: number | null;
}

export interface MetaResponse {
  digest: string;
  seed: number;
  n_jobs: number;
  n_activities: number;
  n_tools: number;
  defaults: { tau: number; phi: number | null };
}

export interface WhatIfProfile {
  activities: string[];
  rho: number | null;
}

export interface ApiErrorPayload {
  error: { code: string; detail: string };
}
