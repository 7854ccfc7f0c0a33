import type {
  ApiErrorPayload,
  JobDetail,
  MetaResponse,
  SearchResponse,
  SensitivityRow,
  TransitionsResponse,
  WhatIfProfile,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(detail);
    this.name = "ServiceError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseError(resp: Response): Promise<ServiceError> {
  try {
    const payload = (await resp.json()) as ApiErrorPayload;
    return new ServiceError(resp.status, payload.error.code, payload.error.detail);
  } catch {
    return new ServiceError(resp.status, "unreachable", `service returned ${resp.status}`);
  }
}

function queryString(params: Record<string, string | number | null | undefined>): string {
  const parts = Object.entries(params)
    .filter(([, v]) => v !== undefined && v !== null)
    .map(([k, v]) => `${encodeURIComponent(k)}=${encodeURIComponent(String(v))}`);
  return parts.length ? `?${parts.join("&")}` : "";
}

/** The service surface the explorer consumes (mocked in tests). */
export interface ServiceClient {
  meta(): Promise<MetaResponse>;
  searchJobs(query: string, limit?: number): Promise<SearchResponse>;
  jobDetail(id: string): Promise<JobDetail>;
  transitions(
    id: string,
    tau: number,
    phi: number | null,
    signal?: AbortSignal,
  ): Promise<TransitionsResponse>;
  whatIf(
    profile: WhatIfProfile,
    tau: number,
    phi: number | null,
    signal?: AbortSignal,
  ): Promise<TransitionsResponse>;
  sensitivity(): Promise<{ items: SensitivityRow[] }>;
}

/** Thin typed client; every number the UI shows comes from these payloads. */
export class ApiClient implements ServiceClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async get<T>(path: string, signal?: AbortSignal): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, { signal });
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  meta(): Promise<MetaResponse> {
    return this.get("/meta");
  }

  searchJobs(query: string, limit = 50): Promise<SearchResponse> {
    return this.get(`/jobs${queryString({ query, limit })}`);
  }

  jobDetail(id: string): Promise<JobDetail> {
    return this.get(`/jobs/${encodeURIComponent(id)}`);
  }

  transitions(
    id: string,
    tau: number,
    phi: number | null,
    signal?: AbortSignal,
  ): Promise<TransitionsResponse> {
    return this.get(
      `/jobs/${encodeURIComponent(id)}/transitions${queryString({ tau, phi, limit: 200 })}`,
      signal,
    );
  }

  async whatIf(
    profile: WhatIfProfile,
    tau: number,
    phi: number | null,
    signal?: AbortSignal,
  ): Promise<TransitionsResponse> {
    const resp = await this.fetchFn(`${this.baseUrl}/what-if${queryString({ limit: 200 })}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ activities: profile.activities, rho: profile.rho, tau, phi }),
      signal,
    });
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as TransitionsResponse;
  }

  sensitivity(): Promise<{ items: SensitivityRow[] }> {
    return this.get("/sensitivity");
  }
}
