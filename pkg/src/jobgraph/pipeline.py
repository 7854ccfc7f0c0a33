"""Pipeline orchestration: config parsing, staged execution, report bundle.

The pipeline is a pure function of (config, seed, corpus bytes). Stages write
documented artifacts into the output directory so each CLI subcommand can run
independently against cached intermediates; the ``report`` path runs everything
and closes with a digest manifest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import report as rpt
from .cluster import (
    ClusterConfig,
    HashEmbeddingProvider,
    SkillCluster,
    judge_against_truth,
    leader_follower,
    size_band,
    stratified_validation_sample,
    theta_sensitivity_grid,
    validation_report,
)
from .corpus import (
    Corpus,
    SynthConfig,
    deduplicate,
    dump_postings,
    generate_synthetic_corpus,
    generate_synthetic_truth,
    load_postings,
)
from .errors import BadConfigError
from .graph import (
    CommunityPartition,
    KnowledgeGraph,
    build_graph,
    community_summaries,
    louvain_partition,
    topology_stats,
)
from .metrics import rank_bridge_skills
from .risk import aggregate_by_isco, heterogeneity_table, profile_corpus, profiles_by_id
from .transitions import (
    DEFAULT_SENSITIVITY_CONFIGS,
    ThresholdConfig,
    decompose_transition,
    enumerate_transition_network,
    gap_skill_frequencies,
    rank_safe_harbors,
    threshold_sensitivity_grid,
    transition_network_stats,
)

DEFAULT_THETA_GRID = (0.80, 0.95, 0.01)
VALIDATION_SAMPLE_CAP = 400


@dataclass(frozen=True)
class PipelineConfig:
    corpus_path: str | None
    synth: SynthConfig | None
    out_dir: str
    seed: int = 0
    fmt: str = "csv"
    dedup_title_threshold: float = 0.85
    theta: float = 0.88
    embed_dimension: int = 768
    primary_threshold: ThresholdConfig = field(default_factory=ThresholdConfig)
    sensitivity_configs: tuple[ThresholdConfig, ...] = DEFAULT_SENSITIVITY_CONFIGS
    theta_grid: tuple[float, float, float] = DEFAULT_THETA_GRID
    isco_levels: tuple[int, ...] = (1, 3)
    min_group_n: int = 1
    labeled_pairs_path: str | None = None
    validation_seed: int = 2025
    top_bridge_skills: int = 25
    top_safe_harbors: int = 20
    top_gap_skills: int = 20
    n_exemplars: int = 5

    def validate(self) -> None:
        if (self.corpus_path is None) == (self.synth is None):
            raise BadConfigError("config needs exactly one corpus source (path or synthetic)")
        if not -1.0 <= self.theta <= 1.0:
            raise BadConfigError(f"theta must be in [-1,1], got {self.theta}")
        if self.fmt not in ("csv", "structured"):
            raise BadConfigError(f"format must be csv|structured, got {self.fmt}")
        if not 0.0 <= self.dedup_title_threshold <= 1.0:
            raise BadConfigError("dedup_title_threshold must be in [0,1]")
        for level in self.isco_levels:
            if not 1 <= level <= 4:
                raise BadConfigError(f"isco level must be 1..4, got {level}")
        self.primary_threshold.validate()
        for cfg in self.sensitivity_configs:
            cfg.validate()
        if self.synth is not None:
            self.synth.validate()

    def canonical_dict(self) -> dict[str, Any]:
        synth = None
        if self.synth is not None:
            synth = {
                "seed": self.synth.seed,
                "n_jobs": self.synth.n_jobs,
                "isco_mix": dict(sorted(self.synth.isco_mix.items())),
                "canonical_activities": self.synth.canonical_activities,
                "canonical_tools": self.synth.canonical_tools,
                "synonym_variants_per_canonical": list(self.synth.synonym_variants_per_canonical),
                "automatable_bias": dict(sorted(self.synth.automatable_bias.items())),
            }
        # out_dir is deliberately absent: the bundle identity must not depend
        # on where it was written
        return {
            "corpus": {"path": self.corpus_path} if self.corpus_path else {"synthetic": synth},
            "seed": self.seed,
            "format": self.fmt,
            "dedup_title_threshold": self.dedup_title_threshold,
            "cluster": {"theta": self.theta, "dimension": self.embed_dimension},
            "threshold": {"tau": self.primary_threshold.tau, "phi": self.primary_threshold.phi},
            "sensitivity": [
                {"tau": c.tau, "phi": c.phi} for c in self.sensitivity_configs
            ],
            "theta_grid": list(self.theta_grid),
            "isco_levels": list(self.isco_levels),
            "min_group_n": self.min_group_n,
            "labeled_pairs": self.labeled_pairs_path,
            "validation_seed": self.validation_seed,
            "top_bridge_skills": self.top_bridge_skills,
            "top_safe_harbors": self.top_safe_harbors,
            "top_gap_skills": self.top_gap_skills,
            "n_exemplars": self.n_exemplars,
        }

    def digest(self) -> str:
        return rpt.digest_of(rpt.canonical_json_bytes(self.canonical_dict()))


def _threshold_from_dict(d: Mapping[str, Any]) -> ThresholdConfig:
    return ThresholdConfig(tau=int(d["tau"]), phi=None if d.get("phi") is None else float(d["phi"]))


def config_from_dict(raw: Mapping[str, Any], overrides: Mapping[str, Any] | None = None) -> PipelineConfig:
    """Build and validate a PipelineConfig from parsed JSON plus CLI overrides."""
    overrides = overrides or {}
    try:
        corpus_spec = raw["corpus"]
    except KeyError:
        raise BadConfigError("config is missing the corpus source") from None
    corpus_path = corpus_spec.get("path")
    synth = None
    if "synthetic" in corpus_spec:
        s = corpus_spec["synthetic"]
        try:
            synth = SynthConfig(
                seed=int(s["seed"]),
                n_jobs=int(s["n_jobs"]),
                isco_mix={str(k): float(v) for k, v in s["isco_mix"].items()},
                canonical_activities=int(s.get("canonical_activities", 60)),
                canonical_tools=int(s.get("canonical_tools", 24)),
                synonym_variants_per_canonical=tuple(s.get("synonym_variants_per_canonical", (1, 3))),
                automatable_bias={str(k): float(v) for k, v in s.get("automatable_bias", {}).items()},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise BadConfigError(f"bad synthetic corpus spec: {exc}") from None
    cluster_spec = raw.get("cluster", {})
    sensitivity = raw.get("sensitivity")
    cfg = PipelineConfig(
        corpus_path=str(corpus_path) if corpus_path else None,
        synth=synth,
        out_dir=str(overrides.get("out_dir") or raw.get("out_dir", "out")),
        seed=int(overrides.get("seed") if overrides.get("seed") is not None else raw.get("seed", 0)),
        fmt=str(overrides.get("fmt") or raw.get("format", "csv")),
        dedup_title_threshold=float(raw.get("dedup_title_threshold", 0.85)),
        theta=float(cluster_spec.get("theta", 0.88)),
        embed_dimension=int(cluster_spec.get("dimension", 768)),
        primary_threshold=_threshold_from_dict(raw.get("threshold", {"tau": 3, "phi": 0.5})),
        sensitivity_configs=tuple(
            _threshold_from_dict(d) for d in sensitivity
        ) if sensitivity else DEFAULT_SENSITIVITY_CONFIGS,
        theta_grid=tuple(raw.get("theta_grid", DEFAULT_THETA_GRID)),
        isco_levels=tuple(int(x) for x in raw.get("isco_levels", (1, 3))),
        min_group_n=int(raw.get("min_group_n", 1)),
        labeled_pairs_path=raw.get("labeled_pairs"),
        validation_seed=int(raw.get("validation_seed", 2025)),
        top_bridge_skills=int(raw.get("top_bridge_skills", 25)),
        top_safe_harbors=int(raw.get("top_safe_harbors", 20)),
        top_gap_skills=int(raw.get("top_gap_skills", 20)),
        n_exemplars=int(raw.get("n_exemplars", 5)),
    )
    cfg.validate()
    return cfg


def load_config(path: str | Path, overrides: Mapping[str, Any] | None = None) -> PipelineConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise BadConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise BadConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise BadConfigError("config must be a JSON object")
    return config_from_dict(raw, overrides)


# -- artifact round-trips -------------------------------------------------------

def save_clusters(
    out_dir: str | Path, theta: float, activities: Sequence[SkillCluster], tools: Sequence[SkillCluster]
) -> bytes:
    payload = rpt.canonical_json_bytes(
        {
            "theta": theta,
            "activities": [
                {"id": c.canonical_id, "representative": c.representative, "members": list(c.members)}
                for c in activities
            ],
            "tools": [
                {"id": c.canonical_id, "representative": c.representative, "members": list(c.members)}
                for c in tools
            ],
        }
    )
    (Path(out_dir) / "clusters.json").write_bytes(payload)
    return payload


def load_clusters(path: str | Path) -> tuple[list[SkillCluster], list[SkillCluster]]:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    activities = [
        SkillCluster(c["id"], "activity", c["representative"], tuple(c["members"]))
        for c in raw["activities"]
    ]
    tools = [
        SkillCluster(c["id"], "tool", c["representative"], tuple(c["members"]))
        for c in raw["tools"]
    ]
    return activities, tools


def load_labeled_pairs(path: str | Path) -> list[tuple[str, str, bool]]:
    """Lines of formA<TAB>formB<TAB>0|1."""
    pairs = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3 or parts[2] not in ("0", "1"):
            raise BadConfigError(f"labeled pairs line {line_no}: expected formA\\tformB\\t0|1")
        pairs.append((parts[0], parts[1], parts[2] == "1"))
    return pairs


# -- stage runners ---------------------------------------------------------------

@dataclass
class PipelineState:
    config: PipelineConfig
    corpus: Corpus | None = None
    activity_clusters: list[SkillCluster] | None = None
    tool_clusters: list[SkillCluster] | None = None
    graph: KnowledgeGraph | None = None
    partition: CommunityPartition | None = None


def stage_ingest(cfg: PipelineConfig) -> Corpus:
    if cfg.corpus_path is not None:
        corpus = load_postings(cfg.corpus_path)
    else:
        corpus = generate_synthetic_corpus(cfg.synth)
    return deduplicate(corpus, cfg.dedup_title_threshold)


def mention_forms(corpus: Corpus) -> tuple[list[str], list[str]]:
    activities = sorted({m for p in corpus.postings for m in p.activity_mentions})
    tools = sorted({m for p in corpus.postings for m in p.tool_mentions})
    return activities, tools


def stage_cluster(
    cfg: PipelineConfig, corpus: Corpus
) -> tuple[list[SkillCluster], list[SkillCluster]]:
    provider = HashEmbeddingProvider(dimension=cfg.embed_dimension)
    activity_forms, tool_forms = mention_forms(corpus)
    cluster_cfg = ClusterConfig(theta=cfg.theta)
    return (
        leader_follower(activity_forms, provider, cluster_cfg, kind="activity"),
        leader_follower(tool_forms, provider, cluster_cfg, kind="tool"),
    )


def _labeled_pairs_for(cfg: PipelineConfig, corpus_forms: set[str]) -> list[tuple[str, str, bool]]:
    if cfg.labeled_pairs_path:
        return [p for p in load_labeled_pairs(cfg.labeled_pairs_path)
                if p[0] in corpus_forms and p[1] in corpus_forms]
    if cfg.synth is not None:
        truth = generate_synthetic_truth(cfg.synth)
        return [
            p for p in truth.labeled_pairs(200, 200, seed=cfg.validation_seed)
            if p[0] in corpus_forms and p[1] in corpus_forms
        ]
    return []


def theta_grid_table(cfg: PipelineConfig, corpus: Corpus) -> rpt.Table:
    provider = HashEmbeddingProvider(dimension=cfg.embed_dimension)
    activity_forms, _ = mention_forms(corpus)
    lo, hi, step = cfg.theta_grid
    labeled = _labeled_pairs_for(cfg, set(activity_forms))
    rows = []
    if labeled and activity_forms:
        for row in theta_sensitivity_grid(activity_forms, provider, labeled, lo, hi, step):
            rows.append((
                rpt.num(row.theta, 2), str(row.n_clusters),
                rpt.num(row.precision, 2) if row.precision is not None else rpt.UNDEFINED,
                rpt.num(row.recall, 2) if row.recall is not None else rpt.UNDEFINED,
            ))
    elif activity_forms:
        n_steps = int(round((hi - lo) / step))
        for i in range(n_steps + 1):
            theta = round(lo + i * step, 10)
            clusters = leader_follower(activity_forms, provider, ClusterConfig(theta=theta))
            rows.append((rpt.num(theta, 2), str(len(clusters)), rpt.UNDEFINED, rpt.UNDEFINED))
    return rpt.Table("theta_sensitivity", ("theta", "n_clusters", "precision", "recall"), tuple(rows))


def validation_tables(
    cfg: PipelineConfig,
    activity_clusters: Sequence[SkillCluster],
    tool_clusters: Sequence[SkillCluster],
) -> list[rpt.Table]:
    clusters = [*activity_clusters, *tool_clusters]
    populations: dict[tuple[str, str], int] = {}
    for c in clusters:
        band = size_band(len(c.members))
        if band is not None:
            key = (c.kind, band)
            populations[key] = populations.get(key, 0) + 1
    plan = {key: min(pop, VALIDATION_SAMPLE_CAP) for key, pop in populations.items()}
    samples = stratified_validation_sample(clusters, plan, seed=cfg.validation_seed)
    plan_rows = tuple(
        (s.kind, s.band, str(s.population), str(len(s.sampled))) for s in samples
    )
    plan_table = rpt.Table(
        "validation_plan", ("kind", "band", "population", "sample"), plan_rows
    )
    if cfg.synth is None:
        return [plan_table]
    truth = generate_synthetic_truth(cfg.synth)
    judgments = judge_against_truth(samples, truth.variant_to_canonical())
    vr = validation_report(samples, judgments)
    rows = []
    for row in vr.rows:
        rows.append((row.kind, row.band, str(row.samples), str(row.correct),
                     str(row.minor), str(row.major), rpt.frac_pct(row.error_rate, 2), "", ""))
    for row, ci in vr.subtotals:
        rows.append((row.kind, row.band, str(row.samples), str(row.correct),
                     str(row.minor), str(row.major), rpt.frac_pct(row.error_rate, 2),
                     rpt.frac_pct(ci[0], 2), rpt.frac_pct(ci[1], 2)))
    rows.append((vr.total.kind, vr.total.band, str(vr.total.samples), str(vr.total.correct),
                 str(vr.total.minor), str(vr.total.major), rpt.frac_pct(vr.total.error_rate, 2),
                 rpt.frac_pct(vr.total_ci[0], 2), rpt.frac_pct(vr.total_ci[1], 2)))
    judged_table = rpt.Table(
        "validation",
        ("kind", "band", "samples", "correct", "minor", "major", "error_rate_pct", "ci_lo_pct", "ci_hi_pct"),
        tuple(rows),
    )
    return [plan_table, judged_table]


def graph_tables(g: KnowledgeGraph, partition: CommunityPartition) -> list[rpt.Table]:
    stats = topology_stats(g)
    n_communities = len(set(partition.assignment.values()))
    sizes: dict[int, int] = {}
    for c in partition.assignment.values():
        sizes[c] = sizes.get(c, 0) + 1
    topo_rows = (
        ("n_jobs", str(stats.n_jobs)),
        ("n_activities", str(stats.n_activities)),
        ("n_tools", str(stats.n_tools)),
        ("n_performs_edges", str(stats.n_edges)),
        ("n_uses_edges", str(g.n_uses_edges)),
        ("bipartite_density", rpt.num(stats.bipartite_density, 5)),
        ("mean_degree", rpt.num(stats.mean_degree, 2)),
        ("max_degree", str(stats.max_degree)),
        ("power_law_gamma", rpt.num(stats.gamma, 2) if stats.gamma is not None else rpt.UNDEFINED),
        ("n_communities", str(n_communities)),
        ("modularity_q", rpt.num(partition.q, 3)),
        ("largest_community_size", str(max(sizes.values()))),
    )
    nodes = [(j, "job", g.labels[j]) for j in g.job_ids]
    nodes += [(a, "activity", g.labels[a]) for a in g.activity_ids]
    nodes += [(t, "tool", g.labels[t]) for t in g.tool_ids]
    edges = [(j, a, "PERFORMS") for j in g.job_ids for a in sorted(g.performs[j])]
    edges += [(a, t, "USES") for a in g.activity_ids for t in sorted(g.uses[a])]
    return [
        rpt.Table("topology", ("metric", "value"), topo_rows),
        rpt.Table("nodes", ("id", "kind", "label"), tuple(nodes)),
        rpt.Table("edges", ("src", "dst", "kind"), tuple(edges)),
    ]


def risk_tables(cfg: PipelineConfig, corpus: Corpus, profiles) -> list[rpt.Table]:
    tables = [
        rpt.Table(
            "risk_profiles",
            ("job_id", "rho", "category"),
            tuple((p.job_id, rpt.num(p.rho, 4), p.category) for p in profiles),
        )
    ]
    for level in cfg.isco_levels:
        rows = []
        for agg in aggregate_by_isco(profiles, corpus, level, cfg.min_group_n):
            label = rpt.ISCO1_LABELS.get(agg.group_code, "") if level == 1 or agg.group_code == "ALL" else ""
            rows.append((
                agg.group_code, label, str(agg.n), rpt.pct(agg.mean_rho),
                rpt.num(agg.sigma, 1), rpt.pct(agg.high_share),
            ))
        tables.append(
            rpt.Table(
                f"risk_by_isco{level}",
                ("code", "label", "n", "mean_rho", "sigma", "high_share"),
                tuple(rows),
            )
        )
    isco3_codes = sorted({p.isco4[:3] for p in corpus.postings})
    het_rows = []
    for row in heterogeneity_table(profiles, corpus, isco3_codes):
        het_rows.append((
            row.isco3,
            rpt.pct(row.mean_rho) if row.mean_rho is not None else rpt.UNDEFINED,
            str(row.high_count), str(row.low_count),
            rpt.frac_pct(row.low_share) if row.low_share is not None else rpt.UNDEFINED,
        ))
    het_rows.sort(key=lambda r: (r[1] == rpt.UNDEFINED, -float(r[1]) if r[1] != rpt.UNDEFINED else 0.0, r[0]))
    tables.append(
        rpt.Table("heterogeneity", ("isco3", "mean_rho", "high", "low", "low_pct"), tuple(het_rows))
    )
    return tables


def community_table(g, partition, risk_map) -> rpt.Table:
    rows = tuple(
        (
            str(s.community_id), str(s.size), str(s.n_jobs),
            rpt.pct(s.mean_rho) if s.mean_rho is not None else rpt.UNDEFINED,
            rpt.num(s.q_int, 3), "|".join(s.sample_titles),
        )
        for s in community_summaries(g, partition, risk_map)
    )
    return rpt.Table(
        "communities",
        ("community_id", "size", "n_jobs", "mean_rho", "q_int", "sample_titles"),
        rows,
    )


def bridge_table(cfg, g, partition, corpus, risk_map) -> rpt.Table:
    ranked = rank_bridge_skills(g, partition, corpus.isco_map(), risk_map, cfg.top_bridge_skills)
    rows = tuple(
        (
            str(i + 1), r.activity_id, r.label, rpt.num(r.c_b, 2), str(r.c_p),
            str(r.k), str(r.d_isco), str(r.i_pr),
            rpt.pct(r.mean_rho) if r.mean_rho is not None else rpt.UNDEFINED, r.tier,
        )
        for i, r in enumerate(ranked)
    )
    return rpt.Table(
        "bridge_skills",
        ("rank", "activity", "label", "c_b", "c_p", "k", "d_isco", "i_pr", "mean_rho", "tier"),
        rows,
    )


def transition_tables(cfg, g, risk_map) -> list[rpt.Table]:
    tn = enumerate_transition_network(g, risk_map, cfg.primary_threshold)
    stats = transition_network_stats(tn)
    stat_rows = (
        ("n_pathways", str(stats.n_pathways)),
        ("mean_shared", rpt.num(stats.mean_shared, 1)),
        ("max_shared", rpt.count(stats.max_shared)),
        ("mean_transfer_pct", rpt.frac_pct(stats.mean_transfer)),
        ("unique_sources", str(stats.unique_sources)),
        ("mean_out_degree", rpt.num(stats.mean_out_degree, 1)),
        ("unique_destinations", str(stats.unique_destinations)),
        ("mean_in_degree", rpt.num(stats.mean_in_degree, 1)),
        ("mean_delta_rho_pp", rpt.num(stats.mean_delta_rho, 1)),
        ("max_risk_reduction_pp", rpt.num(stats.max_risk_reduction, 1)),
        ("high_risk_universe", str(stats.universe_size)),
        ("coverage_pct", rpt.frac_pct(stats.coverage)),
        ("reskilling_gap_pct", rpt.frac_pct(stats.reskilling_gap)),
    )
    pathway_rows = tuple(
        (
            p.source_job, p.target_job, str(len(p.shared)),
            rpt.num(p.transfer_rate, 4), rpt.num(p.jaccard, 4), rpt.num(p.delta_rho, 1),
        )
        for p in tn.pathways
    )
    harbor_rows = tuple(
        (
            str(i + 1), e.target_job, e.label, rpt.pct(e.rho), str(e.k_in),
            rpt.num(e.mean_jaccard, 2), str(e.n_activities), str(e.bridge),
        )
        for i, e in enumerate(rank_safe_harbors(g, tn, risk_map, cfg.top_safe_harbors))
    )
    gap_rows = tuple(
        (
            str(i + 1), s.activity_id, s.label, str(s.f_gap),
            rpt.frac_pct(s.share), rpt.frac_pct(s.cumulative_share),
        )
        for i, s in enumerate(gap_skill_frequencies(g, tn, cfg.top_gap_skills))
    )
    exemplars = sorted(tn.pathways, key=lambda p: (p.delta_rho, p.source_job, p.target_job))
    exemplars = exemplars[: cfg.n_exemplars]
    ex_rows = []
    dec_rows = []
    for i, p in enumerate(exemplars):
        rho_s = risk_map[p.source_job].rho
        rho_t = risk_map[p.target_job].rho
        ex_rows.append(
            (
                str(i + 1), p.source_job, g.labels[p.source_job], p.target_job, g.labels[p.target_job],
                rpt.pct(rho_s), rpt.pct(rho_t), rpt.num(p.delta_rho, 1),
                rpt.frac_pct(p.jaccard), str(len(p.shared)), rpt.frac_pct(p.transfer_rate),
            )
        )
        d = decompose_transition(g, p.source_job, p.target_job)
        labelled = lambda ids: "|".join(g.labels[x] for x in sorted(ids))
        dec_rows.append(
            (
                p.source_job, p.target_job,
                labelled(d.shared_activities), labelled(d.unused_activities), labelled(d.gap_activities),
                labelled(d.shared_tools), labelled(d.unused_tools), labelled(d.gap_tools),
                str(d.n_gap),
            )
        )
    return [
        rpt.Table("transition_stats", ("metric", "value"), stat_rows),
        rpt.Table(
            "pathways",
            ("source", "target", "shared_count", "transfer", "jaccard", "delta_rho"),
            pathway_rows,
        ),
        rpt.Table(
            "safe_harbors",
            ("rank", "target", "label", "rho", "k_in", "mean_jaccard", "n_activities", "bridge"),
            harbor_rows,
        ),
        rpt.Table(
            "gap_skills",
            ("rank", "activity", "label", "f_gap", "share_pct", "cumulative_pct"),
            gap_rows,
        ),
        rpt.Table(
            "exemplars",
            ("rank", "source", "source_label", "target", "target_label",
             "rho_source", "rho_target", "delta_rho", "jaccard_pct", "shared_count", "transfer_pct"),
            tuple(ex_rows),
        ),
        rpt.Table(
            "exemplar_decompositions",
            ("source", "target", "shared_activities", "unused_activities", "gap_activities",
             "shared_tools", "unused_tools", "gap_tools", "n_gap"),
            tuple(dec_rows),
        ),
    ]


def sensitivity_table(cfg, g, risk_map) -> rpt.Table:
    rows = tuple(
        (
            row.config.describe(), str(row.config.tau),
            rpt.num(row.config.phi, 2) if row.config.phi is not None else "-",
            str(row.n_pathways), rpt.num(row.mean_shared, 1),
            rpt.frac_pct(row.mean_transfer), str(row.unique_sources), rpt.frac_pct(row.coverage),
        )
        for row in threshold_sensitivity_grid(g, risk_map, cfg.sensitivity_configs)
    )
    return rpt.Table(
        "sensitivity",
        ("config", "tau", "phi", "n_pathways", "mean_shared", "mean_transfer_pct", "unique_sources", "coverage_pct"),
        rows,
    )


@dataclass(frozen=True)
class PipelineResult:
    out_dir: str
    manifest_digest: str
    file_digests: Mapping[str, str]


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    """Execute every stage and write the full report bundle plus manifest."""
    cfg.validate()
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    corpus = stage_ingest(cfg)
    corpus_path = out / "corpus.jsonl"
    dump_postings(corpus, corpus_path)
    digests = {"corpus.jsonl": rpt.digest_of(corpus_path.read_bytes())}

    config_payload = rpt.canonical_json_bytes(cfg.canonical_dict())
    (out / "config.json").write_bytes(config_payload)
    digests["config.json"] = rpt.digest_of(config_payload)

    activity_clusters, tool_clusters = stage_cluster(cfg, corpus)
    digests["clusters.json"] = rpt.digest_of(save_clusters(out, cfg.theta, activity_clusters, tool_clusters))

    g = build_graph(corpus, activity_clusters, tool_clusters)
    partition = louvain_partition(g, seed=cfg.seed)
    profiles = profile_corpus(corpus)
    risk_map = profiles_by_id(profiles)

    tables: list[rpt.Table] = []
    tables.append(theta_grid_table(cfg, corpus))
    tables.extend(validation_tables(cfg, activity_clusters, tool_clusters))
    tables.extend(graph_tables(g, partition))
    tables.extend(risk_tables(cfg, corpus, profiles))
    tables.append(community_table(g, partition, risk_map))
    tables.append(bridge_table(cfg, g, partition, corpus, risk_map))
    tables.extend(transition_tables(cfg, g, risk_map))
    tables.append(sensitivity_table(cfg, g, risk_map))

    digests.update(rpt.emit_tables(tables, out, cfg.fmt))
    manifest_digest = rpt.write_manifest(out, digests, cfg.seed, cfg.digest())
    return PipelineResult(out_dir=str(out), manifest_digest=manifest_digest, file_digests=digests)
