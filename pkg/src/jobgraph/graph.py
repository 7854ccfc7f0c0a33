"""Tripartite knowledge graph (jobs -PERFORMS-> activities -USES-> tools),
topology statistics, and Louvain community detection.

Degree statistics and density are defined on the job-activity layer; tools
are full graph nodes and participate in community detection and transition
decomposition, but not in PERFORMS-degree arithmetic.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from scipy import optimize, special

from .cluster import SkillCluster, membership_map
from .corpus import Corpus
from .errors import (
    DegenerateDegreesError,
    EmptyGraphError,
    PartialAssignmentError,
    TooFewPointsError,
    UnknownJobError,
    UnresolvedMentionError,
)
from .risk import JobRiskProfile


@dataclass(frozen=True)
class KnowledgeGraph:
    job_ids: tuple[str, ...]
    activity_ids: tuple[str, ...]
    tool_ids: tuple[str, ...]
    labels: Mapping[str, str]
    performs: Mapping[str, frozenset[str]]      # job -> activities
    performed_by: Mapping[str, frozenset[str]]  # activity -> jobs
    uses: Mapping[str, frozenset[str]]          # activity -> tools
    used_by: Mapping[str, frozenset[str]]       # tool -> activities

    @property
    def n_performs_edges(self) -> int:
        return sum(len(v) for v in self.performs.values())

    @property
    def n_uses_edges(self) -> int:
        return sum(len(v) for v in self.uses.values())

    def neighborhood(self, job_id: str) -> frozenset[str]:
        """N(j): the activity set of a job."""
        try:
            return self.performs[job_id]
        except KeyError:
            raise UnknownJobError(job_id) from None

    def job_tools(self, job_id: str) -> frozenset[str]:
        """Tools reachable through a job's activities."""
        acts = self.neighborhood(job_id)
        out: set[str] = set()
        for a in acts:
            out |= self.uses[a]
        return frozenset(out)

    def all_nodes(self) -> list[str]:
        return [*self.job_ids, *self.activity_ids, *self.tool_ids]

    def undirected_edges(self) -> list[tuple[str, str]]:
        """PERFORMS plus USES edges as unordered unit-weight pairs."""
        edges = [(j, a) for j in self.job_ids for a in sorted(self.performs[j])]
        edges += [(a, t) for a in self.activity_ids for t in sorted(self.uses[a])]
        return edges


def _index_reverse(forward: Mapping[str, frozenset[str]], codomain: Iterable[str]) -> dict[str, frozenset[str]]:
    reverse: dict[str, set[str]] = {x: set() for x in codomain}
    for src, targets in forward.items():
        for t in targets:
            reverse[t].add(src)
    return {k: frozenset(v) for k, v in reverse.items()}


def build_graph(
    corpus: Corpus,
    activity_clusters: Sequence[SkillCluster],
    tool_clusters: Sequence[SkillCluster],
) -> KnowledgeGraph:
    """Resolve mentions through the cluster maps and assemble the graph.

    One job node per posting, one node per cluster; duplicate edges collapse.
    Unknown mentions are an error: the cluster pass must cover the corpus.
    """
    act_of = membership_map(activity_clusters)
    tool_of = membership_map(tool_clusters)
    labels: dict[str, str] = {}
    performs: dict[str, frozenset[str]] = {}
    uses_accum: dict[str, set[str]] = {c.canonical_id: set() for c in activity_clusters}
    for c in activity_clusters:
        labels[c.canonical_id] = c.representative
    for c in tool_clusters:
        labels[c.canonical_id] = c.representative
    for p in corpus.postings:
        labels[p.id] = p.title
        acts = set()
        for form in p.activity_mentions:
            if form not in act_of:
                raise UnresolvedMentionError(form)
            acts.add(act_of[form])
        tools = set()
        for form in p.tool_mentions:
            if form not in tool_of:
                raise UnresolvedMentionError(form)
            tools.add(tool_of[form])
        performs[p.id] = frozenset(acts)
        for a in acts:
            uses_accum[a] |= tools
    job_ids = tuple(p.id for p in corpus.postings)
    activity_ids = tuple(c.canonical_id for c in activity_clusters)
    tool_ids = tuple(c.canonical_id for c in tool_clusters)
    uses = {a: frozenset(v) for a, v in uses_accum.items()}
    return KnowledgeGraph(
        job_ids=job_ids,
        activity_ids=activity_ids,
        tool_ids=tool_ids,
        labels=labels,
        performs=performs,
        performed_by=_index_reverse(performs, activity_ids),
        uses=uses,
        used_by=_index_reverse(uses, tool_ids),
    )


def graph_from_edges(
    performs_edges: Iterable[tuple[str, str]],
    uses_edges: Iterable[tuple[str, str]] = (),
    labels: Mapping[str, str] | None = None,
) -> KnowledgeGraph:
    """Assemble a graph directly from edge lists (fixtures and tests)."""
    performs_edges = list(performs_edges)
    uses_edges = list(uses_edges)
    job_ids = tuple(dict.fromkeys(j for j, _ in performs_edges))
    activity_ids = tuple(dict.fromkeys(
        [a for _, a in performs_edges] + [a for a, _ in uses_edges]
    ))
    tool_ids = tuple(dict.fromkeys(t for _, t in uses_edges))
    performs: dict[str, set[str]] = {j: set() for j in job_ids}
    for j, a in performs_edges:
        performs[j].add(a)
    uses: dict[str, set[str]] = {a: set() for a in activity_ids}
    for a, t in uses_edges:
        uses[a].add(t)
    frozen_performs = {j: frozenset(v) for j, v in performs.items()}
    frozen_uses = {a: frozenset(v) for a, v in uses.items()}
    all_ids = [*job_ids, *activity_ids, *tool_ids]
    return KnowledgeGraph(
        job_ids=job_ids,
        activity_ids=activity_ids,
        tool_ids=tool_ids,
        labels=labels or {x: x for x in all_ids},
        performs=frozen_performs,
        performed_by=_index_reverse(frozen_performs, activity_ids),
        uses=frozen_uses,
        used_by=_index_reverse(frozen_uses, tool_ids),
    )


@dataclass(frozen=True)
class UndirectedGraph:
    """Plain node/edge view; community and centrality code accepts either this
    or a KnowledgeGraph (which exposes the same two methods)."""

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def all_nodes(self) -> list[str]:
        return list(self.nodes)

    def undirected_edges(self) -> list[tuple[str, str]]:
        return list(self.edges)


# -- topology -----------------------------------------------------------------

def mean_degree(n_jobs: int, n_performs_edges: int) -> float:
    """Average activities per job."""
    return n_performs_edges / n_jobs


def bipartite_density(n_jobs: int, n_activities: int, n_performs_edges: int) -> float:
    """Realized fraction of possible job-activity edges."""
    return n_performs_edges / (n_jobs * n_activities)


@dataclass(frozen=True)
class TopologyStats:
    n_jobs: int
    n_activities: int
    n_tools: int
    n_edges: int  # PERFORMS edges
    bipartite_density: float
    mean_degree: float
    max_degree: int
    gamma: float | None  # None when the degree distribution is too small/flat to fit


def fit_power_law(degrees: Sequence[int], x_min: int = 1) -> float:
    """Discrete maximum-likelihood exponent for P(x) ~ x^-gamma, x >= x_min."""
    xs = [x for x in degrees if x >= x_min]
    if len(xs) < 10:
        raise TooFewPointsError(f"need >= 10 degrees >= x_min, got {len(xs)}")
    if len(set(xs)) == 1:
        raise DegenerateDegreesError("all degrees equal; exponent unidentifiable")
    log_sum = sum(math.log(x) for x in xs)
    n = len(xs)

    def nll(gamma: float) -> float:
        return n * math.log(special.zeta(gamma, x_min)) + gamma * log_sum

    result = optimize.minimize_scalar(nll, bounds=(1.01, 12.0), method="bounded")
    return float(result.x)


def topology_stats(g: KnowledgeGraph) -> TopologyStats:
    if not g.job_ids or not g.activity_ids:
        raise EmptyGraphError("topology needs at least one job and one activity")
    n_edges = g.n_performs_edges
    job_degrees = [len(g.performs[j]) for j in g.job_ids]
    activity_degrees = [len(g.performed_by[a]) for a in g.activity_ids]
    try:
        gamma = fit_power_law(job_degrees + activity_degrees)
    except (TooFewPointsError, DegenerateDegreesError):
        gamma = None
    return TopologyStats(
        n_jobs=len(g.job_ids),
        n_activities=len(g.activity_ids),
        n_tools=len(g.tool_ids),
        n_edges=n_edges,
        bipartite_density=bipartite_density(len(g.job_ids), len(g.activity_ids), n_edges),
        mean_degree=mean_degree(len(g.job_ids), n_edges),
        max_degree=max(job_degrees),
        gamma=gamma,
    )


# -- communities --------------------------------------------------------------

@dataclass(frozen=True)
class CommunityPartition:
    assignment: Mapping[str, int]
    q: float


def modularity(g, assignment: Mapping[str, int]) -> float:
    """Newman modularity of a partition on the undirected unit-weight graph."""
    for node in g.all_nodes():
        if node not in assignment:
            raise PartialAssignmentError(node)
    edges = g.undirected_edges()
    m = len(edges)
    if m == 0:
        return 0.0
    internal: dict[int, int] = {}
    degree_sum: dict[int, int] = {}
    for u, v in edges:
        cu, cv = assignment[u], assignment[v]
        degree_sum[cu] = degree_sum.get(cu, 0) + 1
        degree_sum[cv] = degree_sum.get(cv, 0) + 1
        if cu == cv:
            internal[cu] = internal.get(cu, 0) + 1
    q = 0.0
    for c, d in degree_sum.items():
        q += internal.get(c, 0) / m - (d / (2 * m)) ** 2
    return q


def _louvain_level(
    adj: dict[str, dict[str, float]],
    loops: dict[str, float],
    m: float,
    order: list[str],
) -> dict[str, int] | None:
    """One local-moving phase; returns node->community or None if nothing moved."""
    community = {node: i for i, node in enumerate(sorted(adj))}
    k = {node: sum(adj[node].values()) + 2 * loops.get(node, 0.0) for node in adj}
    sigma_tot = {community[node]: k[node] for node in adj}
    moved_any = False
    improved = True
    while improved:
        improved = False
        for node in order:
            home = community[node]
            weight_to: dict[int, float] = {}
            for nbr, w in adj[node].items():
                weight_to[community[nbr]] = weight_to.get(community[nbr], 0.0) + w
            sigma_tot[home] -= k[node]
            community[node] = -1
            best_c, best_gain = home, weight_to.get(home, 0.0) / m - sigma_tot[home] * k[node] / (2 * m * m)
            for c in sorted(weight_to):
                if c == home:
                    continue
                gain = weight_to[c] / m - sigma_tot[c] * k[node] / (2 * m * m)
                if gain > best_gain + 1e-12:
                    best_c, best_gain = c, gain
            community[node] = best_c
            sigma_tot[best_c] = sigma_tot.get(best_c, 0.0) + k[node]
            if best_c != home:
                improved = True
                moved_any = True
    return community if moved_any else None


def _aggregate(
    adj: dict[str, dict[str, float]],
    loops: dict[str, float],
    community: dict[str, int],
) -> tuple[dict[str, dict[str, float]], dict[str, float]]:
    new_adj: dict[str, dict[str, float]] = {}
    new_loops: dict[str, float] = {}
    name = {c: f"c{c}" for c in set(community.values())}
    for node, c in community.items():
        new_adj.setdefault(name[c], {})
        new_loops.setdefault(name[c], 0.0)
        new_loops[name[c]] += loops.get(node, 0.0)
    seen_pairs: set[tuple[str, str]] = set()
    for u, nbrs in adj.items():
        for v, w in nbrs.items():
            if (v, u) in seen_pairs:
                continue
            seen_pairs.add((u, v))
            cu, cv = name[community[u]], name[community[v]]
            if cu == cv:
                new_loops[cu] += w
            else:
                new_adj[cu][cv] = new_adj[cu].get(cv, 0.0) + w
                new_adj[cv][cu] = new_adj[cv].get(cu, 0.0) + w
    return new_adj, new_loops


def louvain_partition(g, seed: int = 0) -> CommunityPartition:
    """Two-phase Louvain on the undirected PERFORMS+USES union, unit weights.

    Node visitation order is shuffled once per level with the given seed, so
    results are reproducible. Isolated nodes become singleton communities.
    Falls back to one community per connected component if greedy moving ever
    lands below Q = 0 (cannot happen in practice, kept as a guarantee).
    """
    nodes = g.all_nodes()
    if not nodes:
        raise EmptyGraphError("cannot partition an empty graph")
    edges = g.undirected_edges()
    adj: dict[str, dict[str, float]] = {n: {} for n in nodes}
    for u, v in edges:
        adj[u][v] = adj[u].get(v, 0.0) + 1.0
        adj[v][u] = adj[v].get(u, 0.0) + 1.0
    m = float(len(edges))
    if m == 0:
        assignment = {n: i for i, n in enumerate(sorted(nodes))}
        return CommunityPartition(assignment, 0.0)

    rng = random.Random(seed)
    membership: dict[str, str] = {n: n for n in nodes}  # original -> current super-node
    loops: dict[str, float] = {}
    while True:
        order = sorted(adj)
        rng.shuffle(order)
        community = _louvain_level(adj, loops, m, order)
        if community is None:
            break
        adj, loops = _aggregate(adj, loops, community)
        name = {c: f"c{c}" for c in set(community.values())}
        membership = {orig: name[community[cur]] for orig, cur in membership.items()}
        if len(adj) <= 1:
            break

    ids = sorted(set(membership.values()), key=lambda s: min(n for n in membership if membership[n] == s))
    compact = {s: i for i, s in enumerate(ids)}
    assignment = {n: compact[membership[n]] for n in nodes}
    q = modularity(g, assignment)
    if q < 0.0:
        assignment = _component_partition(g)
        q = modularity(g, assignment)
    return CommunityPartition(assignment, q)


def _component_partition(g) -> dict[str, int]:
    adj: dict[str, set[str]] = {n: set() for n in g.all_nodes()}
    for u, v in g.undirected_edges():
        adj[u].add(v)
        adj[v].add(u)
    assignment: dict[str, int] = {}
    c = 0
    for start in sorted(adj):
        if start in assignment:
            continue
        stack = [start]
        while stack:
            node = stack.pop()
            if node in assignment:
                continue
            assignment[node] = c
            stack.extend(adj[node] - assignment.keys())
        c += 1
    return assignment


@dataclass(frozen=True)
class CommunitySummary:
    community_id: int
    size: int  # jobs + activities + tools
    n_jobs: int
    mean_rho: float | None
    q_int: float  # internal edges / edges touching the community
    sample_titles: tuple[str, ...]


def community_summaries(
    g: KnowledgeGraph,
    partition: CommunityPartition,
    risk_profiles: Mapping[str, JobRiskProfile],
) -> list[CommunitySummary]:
    """Size, mean job risk, and cohesion per community, largest first."""
    members: dict[int, list[str]] = {}
    for node, c in partition.assignment.items():
        members.setdefault(c, []).append(node)
    internal: dict[int, int] = {c: 0 for c in members}
    touching: dict[int, int] = {c: 0 for c in members}
    for u, v in g.undirected_edges():
        cu, cv = partition.assignment[u], partition.assignment[v]
        if cu == cv:
            internal[cu] += 1
            touching[cu] += 1
        else:
            touching[cu] += 1
            touching[cv] += 1
    job_set = set(g.job_ids)
    out = []
    for c, nodes in members.items():
        jobs = sorted(n for n in nodes if n in job_set)
        rhos = [risk_profiles[j].rho for j in jobs]
        out.append(
            CommunitySummary(
                community_id=c,
                size=len(nodes),
                n_jobs=len(jobs),
                mean_rho=sum(rhos) / len(rhos) if rhos else None,
                q_int=internal[c] / touching[c] if touching[c] else 1.0,
                sample_titles=tuple(g.labels[j] for j in jobs[:3]),
            )
        )
    out.sort(key=lambda s: (-s.size, s.community_id))
    return out
