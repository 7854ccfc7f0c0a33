import { describe, expect, it, vi } from "vitest";

import { ApiClient, ServiceError } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("api client", () => {
  it("builds transition URLs with thresholds and paging", async () => {
    const calls: string[] = [];
    const fetchFn = vi.fn(async (url: string) => {
      calls.push(url);
      return jsonResponse({ total: 0, items: [], tau: 4, phi: 0.6, risk_filtered: true });
    });
    const client = new ApiClient("http://svc", fetchFn);
    await client.transitions("s2", 4, 0.6);
    expect(calls).toEqual(["http://svc/jobs/s2/transitions?tau=4&phi=0.6&limit=200"]);
  });

  it("omits phi when null (tau-only mode)", async () => {
    const fetchFn = vi.fn(async (url: string) => {
      expect(url).toBe("/jobs/s2/transitions?tau=3&limit=200");
      return jsonResponse({ total: 0, items: [], tau: 3, phi: null, risk_filtered: true });
    });
    await new ApiClient("", fetchFn).transitions("s2", 3, null);
    expect(fetchFn).toHaveBeenCalledOnce();
  });

  it("posts what-if bodies as JSON", async () => {
    const fetchFn = vi.fn(async (_url: string, init?: RequestInit) => {
      expect(JSON.parse(String(init!.body))).toEqual({
        activities: ["a1"],
        rho: null,
        tau: 3,
        phi: 0.5,
      });
      return jsonResponse({ total: 0, items: [], tau: 3, phi: 0.5, risk_filtered: false });
    });
    await new ApiClient("", fetchFn).whatIf({ activities: ["a1"], rho: null }, 3, 0.5);
  });

  it("maps error payloads to ServiceError with the machine code", async () => {
    const fetchFn = async () =>
      jsonResponse({ error: { code: "unknown_job", detail: "no job 'x'" } }, 404);
    const client = new ApiClient("", fetchFn);
    const err = await client.jobDetail("x").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect((err as ServiceError).status).toBe(404);
    expect((err as ServiceError).code).toBe("unknown_job");
  });

  it("falls back to an unreachable code on non-JSON failures", async () => {
    const fetchFn = async () => new Response("boom", { status: 502 });
    const err = await new ApiClient("", fetchFn).meta().catch((e: unknown) => e);
    expect((err as ServiceError).code).toBe("unreachable");
  });
});
