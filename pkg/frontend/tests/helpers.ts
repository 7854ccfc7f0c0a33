import type { ServiceClient } from "../src/api.js";
import { ServiceError } from "../src/api.js";
import type {
  JobDetail,
  MetaResponse,
  SearchResponse,
  SensitivityRow,
  TransitionsResponse,
  WhatIfProfile,
} from "../src/types.js";

import meta from "./fixtures/meta.json";
import jobsAll from "./fixtures/jobs_all.json";
import detailS1 from "./fixtures/job_detail_s1.json";
import detailS2 from "./fixtures/job_detail_s2.json";
import detailD1 from "./fixtures/job_detail_d1.json";
import detailD3 from "./fixtures/job_detail_d3.json";
import transS2 from "./fixtures/transitions_s2_tau3_phi05.json";
import transS1 from "./fixtures/transitions_s1_tau3_phi05.json";
import transS1Tight from "./fixtures/transitions_s1_tau3_phi075.json";
import transS2Tau5 from "./fixtures/transitions_s2_tau5_phi05.json";
import whatIfS2 from "./fixtures/whatif_s2_profile.json";
import sensitivity from "./fixtures/sensitivity.json";

export const FIXTURES = {
  meta: meta as MetaResponse,
  jobsAll: jobsAll as SearchResponse,
  details: {
    s1: detailS1 as JobDetail,
    s2: detailS2 as JobDetail,
    d1: detailD1 as JobDetail,
    d3: detailD3 as JobDetail,
  } as Record<string, JobDetail>,
  transitions: {
    "s2|3|0.5": transS2 as TransitionsResponse,
    "s1|3|0.5": transS1 as TransitionsResponse,
    "s1|3|0.75": transS1Tight as TransitionsResponse,
    "s2|5|0.5": transS2Tau5 as TransitionsResponse,
  } as Record<string, TransitionsResponse>,
  whatIfS2: whatIfS2 as TransitionsResponse,
  sensitivity: sensitivity as { items: SensitivityRow[] },
};

export interface CallLog {
  transitions: Array<{ id: string; tau: number; phi: number | null }>;
  whatIf: Array<{ profile: WhatIfProfile; tau: number; phi: number | null }>;
  details: string[];
}

/** Fixture-backed service double that records every call. */
export class FakeService implements ServiceClient {
  log: CallLog = { transitions: [], whatIf: [], details: [] };
  delayFor: ((id: string, tau: number, phi: number | null) => number) | null = null;

  async meta(): Promise<MetaResponse> {
    return FIXTURES.meta;
  }

  async searchJobs(query: string): Promise<SearchResponse> {
    const items = FIXTURES.jobsAll.items.filter(
      (j) => j.id.includes(query) || j.title.includes(query),
    );
    return { total: items.length, items };
  }

  async jobDetail(id: string): Promise<JobDetail> {
    this.log.details.push(id);
    const detail = FIXTURES.details[id];
    if (!detail) throw new ServiceError(404, "unknown_job", `no job '${id}'`);
    return detail;
  }

  async transitions(
    id: string,
    tau: number,
    phi: number | null,
    signal?: AbortSignal,
  ): Promise<TransitionsResponse> {
    this.log.transitions.push({ id, tau, phi });
    const delay = this.delayFor?.(id, tau, phi) ?? 0;
    if (delay) await sleep(delay, signal);
    const hit = FIXTURES.transitions[`${id}|${tau}|${phi}`];
    if (!hit) throw new ServiceError(422, "bad_thresholds", `no fixture for ${id}|${tau}|${phi}`);
    return hit;
  }

  async whatIf(
    profile: WhatIfProfile,
    tau: number,
    phi: number | null,
  ): Promise<TransitionsResponse> {
    this.log.whatIf.push({ profile, tau, phi });
    const key = [...profile.activities].sort().join(",");
    if (key === "a1,a2,a3" && profile.rho === 70 && tau === 3 && phi === 0.5) {
      return FIXTURES.whatIfS2;
    }
    throw new ServiceError(422, "unknown_activity", "no fixture for this profile");
  }

  async sensitivity(): Promise<{ items: SensitivityRow[] }> {
    return FIXTURES.sensitivity;
  }
}

export function sleep(ms: number, signal?: AbortSignal): Promise<void> {
  return new Promise((resolve, reject) => {
    const timer = setTimeout(resolve, ms);
    signal?.addEventListener("abort", () => {
      clearTimeout(timer);
      reject(new DOMException("aborted", "AbortError"));
    });
  });
}
