"""Career-transition enumeration under the dual feasibility threshold, with
network statistics, safe-harbor ranking, gap-skill frequencies, exemplar
decomposition, and the threshold sensitivity grid.

A transition (s, t) is realistic when the target is strictly safer, the jobs
share at least `tau` activities, and — when `phi` is set — at least that
fraction of the source's activities transfers. Both threshold comparisons are
non-strict; the risk comparison is strict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import BadConfigError, EmptySourceNeighborhoodError, UnknownJobError
from .graph import KnowledgeGraph
from .risk import JobRiskProfile


@dataclass(frozen=True)
class ThresholdConfig:
    tau: int = 3
    phi: float | None = 0.50  # None = tau-only mode
    require_risk_drop: bool = True

    def validate(self) -> None:
        if self.tau < 1:
            raise BadConfigError(f"tau must be >= 1, got {self.tau}")
        if self.phi is not None and not 0.0 < self.phi <= 1.0:
            raise BadConfigError(f"phi must be in (0,1], got {self.phi}")

    def describe(self) -> str:
        phi = f"{self.phi:.2f}" if self.phi is not None else "-"
        return f"tau>={self.tau} phi>={phi}"


@dataclass(frozen=True)
class TransitionPathway:
    source_job: str
    target_job: str
    shared: frozenset[str]
    transfer_rate: float  # |shared| / |N(source)|
    jaccard: float        # |shared| / |N(source) U N(target)|
    delta_rho: float      # rho(target) - rho(source); negative = safer
    gap: frozenset[str]   # N(target) \ N(source)


@dataclass(frozen=True)
class TransitionNetwork:
    pathways: tuple[TransitionPathway, ...]
    source_universe: frozenset[str]
    config: ThresholdConfig


def pairwise_overlap(
    g: KnowledgeGraph, source_job: str, target_job: str
) -> tuple[frozenset[str], float, float]:
    """Shared activity set, transfer rate, and Jaccard for a job pair."""
    n_s = g.neighborhood(source_job)
    n_t = g.neighborhood(target_job)
    if not n_s:
        raise EmptySourceNeighborhoodError(source_job)
    shared = n_s & n_t
    union = n_s | n_t
    return shared, len(shared) / len(n_s), len(shared) / len(union)


def is_realistic_transition(
    g: KnowledgeGraph,
    risk: Mapping[str, JobRiskProfile],
    source_job: str,
    target_job: str,
    cfg: ThresholdConfig,
) -> bool:
    cfg.validate()
    if source_job not in risk or target_job not in risk:
        raise UnknownJobError(source_job if source_job not in risk else target_job)
    if source_job == target_job:
        return False
    n_s = g.neighborhood(source_job)
    n_t = g.neighborhood(target_job)
    if not n_s:
        return False
    if cfg.require_risk_drop and not risk[target_job].rho < risk[source_job].rho:
        return False
    shared = n_s & n_t
    if len(shared) < cfg.tau:
        return False
    if cfg.phi is not None and len(shared) / len(n_s) < cfg.phi:
        return False
    return True


def _pathway(
    g: KnowledgeGraph,
    risk: Mapping[str, JobRiskProfile],
    source_job: str,
    target_job: str,
) -> TransitionPathway:
    n_s = g.neighborhood(source_job)
    n_t = g.neighborhood(target_job)
    shared = n_s & n_t
    return TransitionPathway(
        source_job=source_job,
        target_job=target_job,
        shared=shared,
        transfer_rate=len(shared) / len(n_s),
        jaccard=len(shared) / len(n_s | n_t),
        delta_rho=risk[target_job].rho - risk[source_job].rho,
        gap=n_t - n_s,
    )


def enumerate_transition_network(
    g: KnowledgeGraph,
    risk: Mapping[str, JobRiskProfile],
    cfg: ThresholdConfig,
    source_category: str = "High",
) -> TransitionNetwork:
    """All feasible (source, target) pathways from jobs in the source risk category.

    Output order is (source id, target id), independent of any execution
    interleaving upstream.
    """
    cfg.validate()
    universe = frozenset(j for j in g.job_ids if risk[j].category == source_category)
    pathways = []
    for s in sorted(universe):
        if not g.neighborhood(s):
            continue
        for t in sorted(g.job_ids):
            if t == s:
                continue
            if is_realistic_transition(g, risk, s, t, cfg):
                pathways.append(_pathway(g, risk, s, t))
    return TransitionNetwork(tuple(pathways), universe, cfg)


@dataclass(frozen=True)
class TransitionStats:
    n_pathways: int
    mean_shared: float | None
    max_shared: int | None
    mean_transfer: float | None
    unique_sources: int
    mean_out_degree: float | None
    unique_destinations: int
    mean_in_degree: float | None
    mean_delta_rho: float | None
    max_risk_reduction: float | None  # most negative delta_rho
    universe_size: int
    coverage: float | None        # unique sources / universe
    reskilling_gap: float | None  # 1 - coverage


def _mean(values: Sequence[float]) -> float | None:
    return sum(values) / len(values) if values else None


def transition_network_stats(tn: TransitionNetwork) -> TransitionStats:
    shared_sizes = [len(p.shared) for p in tn.pathways]
    sources = {p.source_job for p in tn.pathways}
    destinations = {p.target_job for p in tn.pathways}
    n = len(tn.pathways)
    universe = len(tn.source_universe)
    coverage = len(sources) / universe if universe else None
    return TransitionStats(
        n_pathways=n,
        mean_shared=_mean(shared_sizes),
        max_shared=max(shared_sizes) if shared_sizes else None,
        mean_transfer=_mean([p.transfer_rate for p in tn.pathways]),
        unique_sources=len(sources),
        mean_out_degree=n / len(sources) if sources else None,
        unique_destinations=len(destinations),
        mean_in_degree=n / len(destinations) if destinations else None,
        mean_delta_rho=_mean([p.delta_rho for p in tn.pathways]),
        max_risk_reduction=min((p.delta_rho for p in tn.pathways), default=None),
        universe_size=universe,
        coverage=coverage,
        reskilling_gap=1.0 - coverage if coverage is not None else None,
    )


@dataclass(frozen=True)
class SafeHarborEntry:
    target_job: str
    label: str
    rho: float
    k_in: int
    mean_jaccard: float
    n_activities: int
    bridge: int  # distinct jobs sharing >= 1 activity with the target


def rank_safe_harbors(
    g: KnowledgeGraph,
    tn: TransitionNetwork,
    risk: Mapping[str, JobRiskProfile],
    top_k: int | None = None,
) -> list[SafeHarborEntry]:
    """Destinations ranked by in-degree; bridge counts come from the full graph."""
    incoming: dict[str, list[TransitionPathway]] = {}
    for p in tn.pathways:
        incoming.setdefault(p.target_job, []).append(p)
    entries = []
    for target, paths in incoming.items():
        neighbors: set[str] = set()
        for a in g.neighborhood(target):
            neighbors |= g.performed_by[a]
        neighbors.discard(target)
        entries.append(
            SafeHarborEntry(
                target_job=target,
                label=g.labels.get(target, target),
                rho=risk[target].rho,
                k_in=len({p.source_job for p in paths}),
                mean_jaccard=sum(p.jaccard for p in paths) / len(paths),
                n_activities=len(g.neighborhood(target)),
                bridge=len(neighbors),
            )
        )
    entries.sort(key=lambda e: (-e.k_in, -e.mean_jaccard, e.target_job))
    return entries[:top_k] if top_k is not None else entries


@dataclass(frozen=True)
class GapSkillStat:
    activity_id: str
    label: str
    f_gap: int
    share: float            # f_gap / |T|
    cumulative_share: float  # running sum down the ranking; can exceed 1


def gap_skill_frequencies(
    g: KnowledgeGraph, tn: TransitionNetwork, top_k: int | None = None
) -> list[GapSkillStat]:
    """How often each activity appears as a gap skill across all pathways."""
    if not tn.pathways:
        return []
    counts: dict[str, int] = {}
    for p in tn.pathways:
        for a in p.gap:
            counts[a] = counts.get(a, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    if top_k is not None:
        ranked = ranked[:top_k]
    total = len(tn.pathways)
    out = []
    running = 0.0
    for activity_id, f_gap in ranked:
        share = f_gap / total
        running += share
        out.append(GapSkillStat(activity_id, g.labels.get(activity_id, activity_id), f_gap, share, running))
    return out


@dataclass(frozen=True)
class TransitionDecomposition:
    shared_activities: frozenset[str]
    unused_activities: frozenset[str]  # N(s) \ N(t)
    gap_activities: frozenset[str]     # N(t) \ N(s)
    shared_tools: frozenset[str]
    unused_tools: frozenset[str]
    gap_tools: frozenset[str]
    n_gap: int


def decompose_transition(g: KnowledgeGraph, source_job: str, target_job: str) -> TransitionDecomposition:
    """Tri-partition activities and (activity-reachable) tools for one pair."""
    n_s = g.neighborhood(source_job)
    n_t = g.neighborhood(target_job)
    t_s = g.job_tools(source_job)
    t_t = g.job_tools(target_job)
    gap_activities = n_t - n_s
    return TransitionDecomposition(
        shared_activities=n_s & n_t,
        unused_activities=n_s - n_t,
        gap_activities=gap_activities,
        shared_tools=t_s & t_t,
        unused_tools=t_s - t_t,
        gap_tools=t_t - t_s,
        n_gap=len(gap_activities),
    )


@dataclass(frozen=True)
class SensitivityRow:
    config: ThresholdConfig
    n_pathways: int
    mean_shared: float | None
    mean_transfer: float | None
    unique_sources: int
    coverage: float | None


DEFAULT_SENSITIVITY_CONFIGS = (
    ThresholdConfig(tau=3, phi=None),
    ThresholdConfig(tau=4, phi=None),
    ThresholdConfig(tau=5, phi=None),
    ThresholdConfig(tau=3, phi=0.30),
    ThresholdConfig(tau=4, phi=0.30),
    ThresholdConfig(tau=5, phi=0.30),
    ThresholdConfig(tau=3, phi=0.40),
    ThresholdConfig(tau=4, phi=0.40),
    ThresholdConfig(tau=3, phi=0.50),
    ThresholdConfig(tau=4, phi=0.50),
    ThresholdConfig(tau=5, phi=0.50),
    ThresholdConfig(tau=3, phi=0.60),
    ThresholdConfig(tau=4, phi=0.60),
)


def threshold_sensitivity_grid(
    g: KnowledgeGraph,
    risk: Mapping[str, JobRiskProfile],
    configs: Sequence[ThresholdConfig] = DEFAULT_SENSITIVITY_CONFIGS,
) -> list[SensitivityRow]:
    """One fresh enumeration per config; no incremental shortcuts."""
    if not configs:
        raise BadConfigError("need at least one threshold config")
    rows = []
    for cfg in configs:
        tn = enumerate_transition_network(g, risk, cfg)
        stats = transition_network_stats(tn)
        rows.append(
            SensitivityRow(
                config=cfg,
                n_pathways=stats.n_pathways,
                mean_shared=stats.mean_shared,
                mean_transfer=stats.mean_transfer,
                unique_sources=stats.unique_sources,
                coverage=stats.coverage,
            )
        )
    return rows
