"""Acceptance gate: one test per release criterion, at the stated tolerance.

Run with ``pytest tests/test_acceptance.py -v`` (one PASSED/FAILED line per
criterion) or ``-s`` for the explicit PASS lines.
"""

import itertools
import random
import time
from collections import deque

import pytest

from jobgraph.cluster import clusters_from_truth, wilson_interval
from jobgraph.corpus import (
    Importance,
    SynthConfig,
    Task,
    generate_synthetic_corpus,
    generate_synthetic_truth,
)
from jobgraph.graph import (
    UndirectedGraph,
    bipartite_density,
    build_graph,
    louvain_partition,
    mean_degree,
    modularity,
)
from jobgraph.metrics import betweenness_centrality, connection_pairs, importance_score
from jobgraph.pipeline import config_from_dict, run_pipeline
from jobgraph.risk import aggregate_by_isco, compute_risk, heterogeneity_share, profile_corpus, profiles_by_id
from jobgraph.transitions import (
    DEFAULT_SENSITIVITY_CONFIGS,
    enumerate_transition_network,
)


def ok(line):
    print(f"PASS: {line}")


# -- criterion: Wilson CI reproduction -----------------------------------------

def test_wilson_ci_reproduction():
    start = time.perf_counter()
    lo, hi = wilson_interval(8, 1085, 1.96)
    elapsed = time.perf_counter() - start
    assert (round(lo * 100, 2), round(hi * 100, 2)) == (0.37, 1.45)
    lo, hi = wilson_interval(0, 565, 1.96)
    assert abs(lo * 100 - 0.00) <= 0.02 and abs(hi * 100 - 0.67) <= 0.02
    lo, hi = wilson_interval(8, 520, 1.96)
    assert abs(lo * 100 - 0.78) <= 0.02 and abs(hi * 100 - 3.00) <= 0.02
    assert elapsed < 1e-3
    ok(f"Wilson CIs reproduce published intervals ({elapsed * 1e6:.0f} us/call)")


# -- criterion: topology arithmetic --------------------------------------------

def test_topology_arithmetic():
    start = time.perf_counter()
    degree = mean_degree(9_978, 84_346)
    density = bipartite_density(9_978, 19_766, 84_346)
    elapsed = time.perf_counter() - start
    assert round(degree, 2) == 8.45
    assert round(density, 5) == 0.00043
    assert elapsed < 1e-3
    ok("topology formulas reproduce 8.45 mean degree and 0.00043 density")


# -- criterion: heterogeneity semantics -----------------------------------------

def test_heterogeneity_semantics():
    published = [((76, 25), 24.8), ((230, 163), 41.5), ((168, 137), 44.9), ((41, 106), 72.1)]
    for (high, low), expected in published:
        got = heterogeneity_share(high, low) * 100
        assert abs(got - expected) <= 0.05, f"({high},{low}): {got} vs {expected}"
    ok("all four published heterogeneity rows within 0.05 pp")


# -- criterion: importance products ---------------------------------------------

def test_importance_products():
    rows = [
        (529, 27, 14_283), (387, 27, 10_449), (577, 15, 8_655), (328, 22, 7_216),
        (355, 18, 6_390), (293, 21, 6_153), (321, 17, 5_457), (411, 12, 4_932),
        (342, 14, 4_788), (467, 10, 4_670),
    ]
    for k, d, expected in rows:
        assert importance_score(k, d) == expected
    ok("all ten published importance products exact")


# -- criterion: connection pairs --------------------------------------------------

def _star(community_sizes, rng=None):
    from jobgraph.graph import CommunityPartition, graph_from_edges

    edges, assignment, i = [], {}, 0
    for c, size in enumerate(community_sizes):
        for _ in range(size):
            edges.append((f"J{i}", "skill"))
            assignment[f"J{i}"] = c
            i += 1
    g = graph_from_edges(edges)
    assignment["skill"] = 0
    return g, CommunityPartition(assignment, 0.0)


def test_connection_pairs():
    g, part = _star([10, 20])
    assert connection_pairs(g, part, "skill") == 200
    rng = random.Random(1)
    for case in range(100):
        sizes = [rng.randint(0, 12) for _ in range(3)]
        if sum(sizes) == 0:
            sizes[0] = 1
        g, part = _star(sizes)
        expected = sum(a * b for a, b in itertools.combinations(sizes, 2))
        assert connection_pairs(g, part, "skill") == expected, f"case {case} sizes {sizes}"
    ok("worked example 10x20=200 and 100 random 3-community cases exact")


# -- criterion: betweenness oracle equivalence ------------------------------------

def _oracle_betweenness(nodes, edges):
    adj = {n: set() for n in nodes}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)

    def shortest_paths(s, t):
        dist = {s: 0}
        q = deque([s])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    q.append(w)
        if t not in dist:
            return []
        paths = []

        def back(node, acc):
            if node == s:
                paths.append(acc)
                return
            for prev in adj[node]:
                if dist.get(prev) == dist[node] - 1:
                    back(prev, acc + [prev])

        back(t, [t])
        return paths

    cb = {n: 0.0 for n in nodes}
    for s, t in itertools.combinations(sorted(nodes), 2):
        paths = shortest_paths(s, t)
        if not paths:
            continue
        for v in nodes:
            if v in (s, t):
                continue
            cb[v] += sum(1 for p in paths if v in p) / len(paths)
    return cb


def test_betweenness_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(2024)
    for case in range(50):
        n = rng.randint(2, 12)
        nodes = tuple(f"n{i}" for i in range(n))
        edges = tuple(e for e in itertools.combinations(nodes, 2) if rng.random() < 0.35)
        got = betweenness_centrality(UndirectedGraph(nodes, edges))
        want = _oracle_betweenness(nodes, edges)
        for node in nodes:
            assert got[node] == pytest.approx(want[node], abs=1e-9), f"case {case}"
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    ok(f"Brandes matches path-enumeration oracle on 50 graphs ({elapsed:.2f}s)")


# -- criterion: modularity identities ----------------------------------------------

def test_modularity_identities():
    bridged = UndirectedGraph(
        tuple("abcdef"),
        (("a", "b"), ("b", "c"), ("a", "c"), ("d", "e"), ("e", "f"), ("d", "f"), ("c", "d")),
    )
    assert abs(modularity(bridged, {n: 0 for n in bridged.nodes})) <= 1e-12
    two_k3 = UndirectedGraph(
        tuple("abcdef"),
        (("a", "b"), ("b", "c"), ("a", "c"), ("d", "e"), ("e", "f"), ("d", "f")),
    )
    q = modularity(two_k3, {n: (0 if n in "abc" else 1) for n in two_k3.nodes})
    assert abs(q - 0.5) <= 1e-12
    part = louvain_partition(bridged, seed=0)
    groups = {}
    for node, c in part.assignment.items():
        groups.setdefault(c, set()).add(node)
    assert set(map(frozenset, groups.values())) == {frozenset("abc"), frozenset("def")}
    ok("Q identities hold and Louvain recovers the bridged triangles")


# -- criterion: transition-rule oracle equivalence ----------------------------------

def _small_case(seed):
    cfg = SynthConfig(
        seed=seed,
        n_jobs=12 + seed % 19,  # 12..30 jobs
        isco_mix={"1": 0.3, "2": 0.2, "4": 0.3, "5": 0.2},
        canonical_activities=12,
        canonical_tools=5,
        automatable_bias={"4": 0.9, "5": 0.6, "2": 0.4, "1": 0.1},
    )
    corpus = generate_synthetic_corpus(cfg)
    truth = generate_synthetic_truth(cfg)
    g = build_graph(
        corpus,
        clusters_from_truth(truth.activity_variants, "activity"),
        clusters_from_truth(truth.tool_variants, "tool"),
    )
    return g, profiles_by_id(profile_corpus(corpus))


def _oracle_pairs(g, risk, cfg):
    out = set()
    for s in g.job_ids:
        if risk[s].category != "High" or not g.performs[s]:
            continue
        for t in g.job_ids:
            if t == s or not risk[t].rho < risk[s].rho:
                continue
            shared = g.performs[s] & g.performs[t]
            if len(shared) < cfg.tau:
                continue
            if cfg.phi is not None and len(shared) / len(g.performs[s]) < cfg.phi:
                continue
            out.add((s, t))
    return out


def _eff_phi(phi):
    return 0.0 if phi is None else phi


def test_transition_rule_oracle_equivalence():
    grid = DEFAULT_SENSITIVITY_CONFIGS
    total_pathways = 0
    for seed in range(100):
        g, risk = _small_case(seed)
        by_config = {}
        for cfg in grid:
            tn = enumerate_transition_network(g, risk, cfg)
            got = {(p.source_job, p.target_job) for p in tn.pathways}
            assert got == _oracle_pairs(g, risk, cfg), f"seed {seed} cfg {cfg.describe()}"
            by_config[(cfg.tau, cfg.phi)] = got
            total_pathways += len(got)
        for a, b in itertools.permutations(grid, 2):
            if a.tau <= b.tau and _eff_phi(a.phi) <= _eff_phi(b.phi):
                assert by_config[(b.tau, b.phi)] <= by_config[(a.tau, a.phi)], (
                    f"seed {seed}: {b.describe()} not nested in {a.describe()}"
                )
    assert total_pathways > 0, "grid never produced a pathway; fixtures too sparse"
    ok(f"dual-threshold enumeration equals oracle on 100 corpora x {len(grid)} configs")


# -- criterion: risk formula ----------------------------------------------------

def test_risk_formula():
    t = lambda imp, auto: Task("t", Importance(imp), auto)
    assert compute_risk([t("P", True)]) == 100.0
    assert compute_risk([t("P", True), t("S", False), t("A", True)]) == pytest.approx(70.0)
    assert compute_risk([t("P", False), t("S", False), t("A", False)]) == 0.0
    rng = random.Random(77)
    for case in range(1000):
        tasks = [t(rng.choice("PSA"), rng.random() < 0.5) for _ in range(rng.randint(1, 15))]
        base = compute_risk(tasks)
        idx = rng.randrange(len(tasks))
        flipped = list(tasks)
        flipped[idx] = Task("t", tasks[idx].importance, True)
        assert compute_risk(flipped) >= base - 1e-12, f"case {case}"
    ok("risk examples exact; monotone on 1000 random task lists")


# -- criterion: end-to-end determinism --------------------------------------------

def test_end_to_end_determinism(tmp_path):
    raw = {
        "corpus": {
            "synthetic": {
                "seed": 7,
                "n_jobs": 500,
                "isco_mix": {"1": 0.25, "2": 0.2, "3": 0.15, "4": 0.25, "5": 0.15},
                "automatable_bias": {"4": 0.8, "5": 0.55, "3": 0.5, "2": 0.35, "1": 0.15},
            }
        },
        "seed": 7,
        "out_dir": str(tmp_path / "a"),
    }
    start = time.perf_counter()
    first = run_pipeline(config_from_dict(raw))
    second = run_pipeline(config_from_dict({**raw, "out_dir": str(tmp_path / "b")}))
    elapsed = time.perf_counter() - start
    assert first.manifest_digest == second.manifest_digest
    assert first.file_digests == second.file_digests
    assert elapsed < 60.0
    ok(f"500-job pipeline reproducible; two runs in {elapsed:.1f}s")


# -- criterion: synthetic gradient -------------------------------------------------

def test_synthetic_gradient():
    for seed in range(10):
        cfg = SynthConfig(
            seed=seed,
            n_jobs=400,
            isco_mix={"4": 0.5, "1": 0.5},
            automatable_bias={"4": 0.7, "1": 0.2},
        )
        corpus = generate_synthetic_corpus(cfg)
        rows = aggregate_by_isco(profile_corpus(corpus), corpus, level=1)
        means = {r.group_code: r.mean_rho for r in rows}
        assert means["4"] > means["1"], f"seed {seed}: {means}"
    ok("clerical-vs-manager risk gradient holds on all 10 seeds")
