import { ServiceClient, ServiceError } from "./api.js";
import { debounce } from "./debounce.js";
import {
  ExplorerState,
  SourceSelection,
  buildGapPlan,
  initialState,
  withBanner,
  withDestination,
  withPathways,
  withSource,
  withThresholds,
} from "./state.js";
import type { JobSummary, TransitionsResponse } from "./types.js";

type Listener = (state: ExplorerState) => void;

/**
 * Session controller: owns the state, debounces slider-driven re-queries, and
 * drops stale responses (last request wins). All metric numbers flow straight
 * from service payloads into the state.
 */
export class ExplorerController {
  state: ExplorerState = initialState();

  private seq = 0;
  private inflight: AbortController | null = null;
  private readonly requeryDebounced: ((...args: []) => void) & { cancel(): void };

  constructor(
    private readonly api: ServiceClient,
    private readonly listener: Listener = () => {},
    debounceMs = 250,
  ) {
    this.requeryDebounced = debounce(() => void this.refresh(), debounceMs);
  }

  private commit(state: ExplorerState): void {
    this.state = state;
    this.listener(state);
  }

  async search(query: string): Promise<JobSummary[]> {
    if (!query) return []; // empty query issues no request
    const resp = await this.api.searchJobs(query);
    return resp.items;
  }

  /** Select a job as the transition source; fetches its detail, then re-queries. */
  async selectJob(id: string): Promise<void> {
    try {
      const detail = await this.api.jobDetail(id);
      const source: SourceSelection = {
        kind: "job",
        id: detail.id,
        title: detail.title,
        rho: detail.rho,
        activities: detail.activities.map((a) => a.id),
        tools: detail.tools.map((t) => t.id),
      };
      this.commit(withSource(this.state, source));
      await this.refresh();
    } catch (err) {
      this.fail(err);
    }
  }

  /** Use a custom skill profile as the source; re-queries immediately. */
  async composeProfile(activities: string[], rho: number | null): Promise<void> {
    this.commit(withSource(this.state, { kind: "profile", activities, rho }));
    await this.refresh();
  }

  /** Slider movement: state updates now, the re-query is debounce-batched. */
  adjustThresholds(tau: number, phi: number): void {
    this.commit(withThresholds(this.state, tau, phi));
    if (this.state.source) this.requeryDebounced();
  }

  /** Fetch destinations for the current source and thresholds. */
  async refresh(): Promise<void> {
    const source = this.state.source;
    if (!source) return;
    this.requeryDebounced.cancel();
    this.inflight?.abort();
    const abort = new AbortController();
    this.inflight = abort;
    const ticket = ++this.seq;
    this.commit({ ...this.state, loading: true });
    try {
      const resp = await this.query(source, abort.signal);
      if (ticket !== this.seq) return; // superseded; last write wins
      this.commit(withPathways(this.state, resp));
    } catch (err) {
      if (ticket !== this.seq || (err instanceof DOMException && err.name === "AbortError")) {
        return;
      }
      this.fail(err);
    }
  }

  private query(source: SourceSelection, signal: AbortSignal): Promise<TransitionsResponse> {
    if (source.kind === "job") {
      return this.api.transitions(source.id, this.state.tau, this.state.phi, signal);
    }
    return this.api.whatIf(
      { activities: source.activities, rho: source.rho },
      this.state.tau,
      this.state.phi,
      signal,
    );
  }

  /** Open the gap-skill plan for one destination in the fetched list. */
  async inspectDestination(target: string): Promise<void> {
    const next = withDestination(this.state, target);
    if (next === this.state) return; // not in the list; ignore
    this.commit(next);
    const source = this.state.source;
    const item = (this.state.pathways ?? []).find((i) => i.target === target);
    if (!source || !item) return;
    try {
      const detail = await this.api.jobDetail(target);
      if (this.state.selectedDestination !== target) return;
      const sourceTools = source.kind === "job" ? source.tools : [];
      this.commit({ ...this.state, gapPlan: buildGapPlan(source, sourceTools, detail, item) });
    } catch (err) {
      this.fail(err);
    }
  }

  deselectDestination(): void {
    this.commit(withDestination(this.state, null));
  }

  private fail(err: unknown): void {
    const message =
      err instanceof ServiceError
        ? `${err.code}: ${err.message}`
        : "service unreachable";
    this.commit(withBanner(this.state, message));
  }
}
