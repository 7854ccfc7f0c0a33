"""Bridge-skill metrics: betweenness centrality, cross-community connection
pairs, and the degree-times-diversity importance score with priority tiers.

Betweenness runs on the job-activity layer only: bridge-skill semantics are
about job-to-job paths through skills, and tool nodes would distort those
paths without adding transition meaning.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .errors import EmptyGraphError, UnknownActivityError
from .graph import CommunityPartition, KnowledgeGraph
from .risk import JobRiskProfile

TIER1_RHO = 35.0
TIER2_RHO = 45.0


def importance_score(k: int, d_isco: int) -> int:
    """Degree times ISCO-2 diversity; exact integer arithmetic."""
    return k * d_isco


@dataclass(frozen=True)
class BridgeSkillMetrics:
    activity_id: str
    label: str
    c_b: float | None   # betweenness, None when not computed for a lone lookup
    c_p: int | None     # connection pairs, None without a partition
    k: int              # jobs requiring the skill
    d_isco: int         # distinct ISCO-2 prefixes among those jobs
    i_pr: int           # k * d_isco
    mean_rho: float | None
    tier: str           # Universal | Tier1 | Tier2 | Untiered


def betweenness_centrality(g) -> dict[str, float]:
    """Exact unnormalized betweenness; Brandes accumulation, each unordered
    source/target pair counted once.

    For a KnowledgeGraph this runs on the job-activity layer; any object with
    ``all_nodes``/``undirected_edges`` (e.g. test fixtures) works too.
    """
    if isinstance(g, KnowledgeGraph):
        nodes = [*g.job_ids, *g.activity_ids]
        pairs = [(j, a) for j in g.job_ids for a in sorted(g.performs[j])]
    else:
        nodes = g.all_nodes()
        pairs = g.undirected_edges()
    if not nodes:
        raise EmptyGraphError("betweenness needs a nonempty graph")
    adj: dict[str, list[str]] = {n: [] for n in nodes}
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    cb = dict.fromkeys(nodes, 0.0)
    for s in nodes:
        # single-source shortest paths
        dist = {s: 0}
        sigma = dict.fromkeys(nodes, 0.0)
        sigma[s] = 1.0
        preds: dict[str, list[str]] = {n: [] for n in nodes}
        stack: list[str] = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        # dependency accumulation
        delta = dict.fromkeys(nodes, 0.0)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                cb[w] += delta[w]
    return {n: v / 2.0 for n, v in cb.items()}


def connection_pairs(g: KnowledgeGraph, partition: CommunityPartition, activity_id: str) -> int:
    """Cross-community job pairs linked by one skill: sum of L_i * L_j over community pairs."""
    if activity_id not in g.performed_by:
        raise UnknownActivityError(activity_id)
    links: dict[int, int] = {}
    for j in g.performed_by[activity_id]:
        c = partition.assignment[j]
        links[c] = links.get(c, 0) + 1
    total = sum(links.values())
    return (total * total - sum(v * v for v in links.values())) // 2


def skill_importance(
    g: KnowledgeGraph,
    isco_map: Mapping[str, str],
    risk_profiles: Mapping[str, JobRiskProfile],
    activity_id: str,
    partition: CommunityPartition | None = None,
    betweenness: Mapping[str, float] | None = None,
) -> BridgeSkillMetrics:
    """Importance score and tier for one activity.

    Universal means the skill's ISCO-2 diversity equals the corpus-wide
    maximum; the remaining tiers band on the mean risk of adjacent jobs.
    """
    if activity_id not in g.performed_by:
        raise UnknownActivityError(activity_id)
    max_d = max(
        (len({isco_map[j][:2] for j in g.performed_by[a]}) for a in g.activity_ids),
        default=0,
    )
    return _metrics_for(g, isco_map, risk_profiles, activity_id, max_d, partition, betweenness)


def _metrics_for(
    g: KnowledgeGraph,
    isco_map: Mapping[str, str],
    risk_profiles: Mapping[str, JobRiskProfile],
    activity_id: str,
    max_d_isco: int,
    partition: CommunityPartition | None,
    betweenness: Mapping[str, float] | None,
) -> BridgeSkillMetrics:
    jobs = g.performed_by[activity_id]
    k = len(jobs)
    d_isco = len({isco_map[j][:2] for j in jobs})
    rhos = [risk_profiles[j].rho for j in jobs]
    mean_rho = sum(rhos) / len(rhos) if rhos else None
    if k == 0:
        tier = "Untiered"
    elif d_isco == max_d_isco and max_d_isco > 0:
        tier = "Universal"
    elif mean_rho < TIER1_RHO:
        tier = "Tier1"
    elif mean_rho < TIER2_RHO:
        tier = "Tier2"
    else:
        tier = "Untiered"
    return BridgeSkillMetrics(
        activity_id=activity_id,
        label=g.labels.get(activity_id, activity_id),
        c_b=betweenness.get(activity_id) if betweenness is not None else None,
        c_p=connection_pairs(g, partition, activity_id) if partition is not None else None,
        k=k,
        d_isco=d_isco,
        i_pr=importance_score(k, d_isco),
        mean_rho=mean_rho,
        tier=tier,
    )


def rank_bridge_skills(
    g: KnowledgeGraph,
    partition: CommunityPartition,
    isco_map: Mapping[str, str],
    risk_profiles: Mapping[str, JobRiskProfile],
    top_n: int | None = None,
) -> list[BridgeSkillMetrics]:
    """All activities ranked by connection pairs, ties by degree then id."""
    cb = betweenness_centrality(g) if g.job_ids or g.activity_ids else {}
    max_d = max(
        (len({isco_map[j][:2] for j in g.performed_by[a]}) for a in g.activity_ids),
        default=0,
    )
    rows = [
        _metrics_for(g, isco_map, risk_profiles, a, max_d, partition, cb)
        for a in g.activity_ids
    ]
    rows.sort(key=lambda r: (-r.c_p, -r.k, r.activity_id))
    return rows[:top_n] if top_n is not None else rows
