import { describe, expect, it } from "vitest";

import {
  buildGapPlan,
  clampTau,
  emptyStateMessage,
  initialState,
  snapPhi,
  summaryOf,
  withDestination,
  withPathways,
  withSource,
  withThresholds,
  type SourceSelection,
} from "../src/state.js";
import { FIXTURES } from "./helpers.js";

// mirror the service's own detail payload so set arithmetic matches the wire
const s2Source: SourceSelection = {
  kind: "job",
  id: "s2",
  title: "s2 role",
  rho: 70,
  activities: FIXTURES.details.s2.activities.map((a) => a.id),
  tools: FIXTURES.details.s2.tools.map((t) => t.id),
};

function loadedState() {
  const state = withSource(initialState(), s2Source);
  return withPathways(state, FIXTURES.transitions["s2|3|0.5"]);
}

describe("slider invariants", () => {
  it("clamps tau to [1, 8] integers", () => {
    expect(clampTau(0)).toBe(1);
    expect(clampTau(9)).toBe(8);
    expect(clampTau(3.4)).toBe(3);
  });

  it("snaps phi to the 0.05 grid in [0.1, 1.0]", () => {
    expect(snapPhi(0.52)).toBe(0.5);
    expect(snapPhi(0.53)).toBe(0.55);
    expect(snapPhi(0.01)).toBe(0.1);
    expect(snapPhi(1.2)).toBe(1.0);
  });

  it("threshold updates go through the clamps", () => {
    const state = withThresholds(initialState(), 99, 0.52);
    expect(state.tau).toBe(8);
    expect(state.phi).toBe(0.5);
  });
});

describe("destination invariant", () => {
  it("accepts only targets from the fetched list", () => {
    const state = loadedState();
    expect(withDestination(state, "d3").selectedDestination).toBe("d3");
    expect(withDestination(state, "ghost").selectedDestination).toBeNull();
  });

  it("clears a selection the new payload no longer contains", () => {
    const selected = withDestination(loadedState(), "d1");
    const after = withPathways(selected, FIXTURES.transitions["s2|5|0.5"]);
    expect(after.selectedDestination).toBeNull();
    expect(after.gapPlan).toBeNull();
  });

  it("deselect clears the plan view", () => {
    const selected = withDestination(loadedState(), "d1");
    const cleared = withDestination(selected, null);
    expect(cleared.selectedDestination).toBeNull();
    expect(cleared.gapPlan).toBeNull();
  });
});

describe("summary", () => {
  it("count is the service total, mean is over received deltas", () => {
    const summary = summaryOf(loadedState());
    expect(summary.count).toBe(FIXTURES.transitions["s2|3|0.5"].total);
    const deltas = FIXTURES.transitions["s2|3|0.5"].items.map((i) => i.delta_rho as number);
    expect(summary.meanDeltaRho).toBeCloseTo(deltas.reduce((a, b) => a + b) / deltas.length, 12);
  });

  it("mean is null when the service sent no deltas", () => {
    const state = withPathways(withSource(initialState(), s2Source), {
      ...FIXTURES.transitions["s2|3|0.5"],
      items: [],
      total: 0,
    });
    expect(summaryOf(state).meanDeltaRho).toBeNull();
  });
});

describe("empty state", () => {
  it("mentions reskilling when tau exceeds the profile degree", () => {
    let state = withSource(initialState(), s2Source);
    state = withThresholds(state, 5, 0.5);
    state = withPathways(state, FIXTURES.transitions["s2|5|0.5"]);
    const message = emptyStateMessage(state);
    expect(message).toMatch(/reskilling/i);
    expect(message).toContain("τ=5");
  });

  it("is null while results exist", () => {
    expect(emptyStateMessage(loadedState())).toBeNull();
  });
});

describe("gap plan", () => {
  it("tri-partitions activities and tools from service payloads", () => {
    const item = FIXTURES.transitions["s2|3|0.5"].items.find((i) => i.target === "d1")!;
    const plan = buildGapPlan(s2Source, s2Source.tools, FIXTURES.details.d1, item);
    expect(plan.sharedActivities.map((n) => n.id).sort()).toEqual(["a1", "a2", "a3"]);
    expect(plan.unusedActivities).toEqual([]);
    expect(plan.gapActivities.map((n) => n.id)).toEqual(["a5"]);
    expect(plan.nGap).toBe(1);
    expect(plan.deltaRho).toBe(-40.0);
    // d1's reachable tools equal the source's in the fixture bundle
    expect(plan.gapTools).toEqual([]);
    expect(plan.unusedTools).toEqual([]);
    expect(plan.sharedTools.map((t) => t.id).sort()).toEqual(["t1", "t2", "t3"]);
  });

  it("marks source-only activities unused", () => {
    const s1: SourceSelection = {
      kind: "job",
      id: "s1",
      title: "s1 role",
      rho: 90,
      activities: FIXTURES.details.s1.activities.map((a) => a.id),
      tools: FIXTURES.details.s1.tools.map((t) => t.id),
    };
    const item = FIXTURES.transitions["s1|3|0.5"].items.find((i) => i.target === "d1")!;
    const plan = buildGapPlan(s1, s1.tools, FIXTURES.details.d1, item);
    expect(plan.unusedActivities.map((n) => n.id)).toEqual(["a4"]);
  });
});
