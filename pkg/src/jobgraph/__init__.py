"""Labor-market knowledge graph toolkit.

Pipeline shape: load or synthesize a job-posting corpus, resolve skill/tool
mentions into canonical clusters, build the tripartite graph, score automation
risk, then run the analysis suite (ISCO aggregation, communities, bridge
skills, transition pathfinding, sensitivity grids) and serve the result.
"""

from .corpus import (
    Corpus,
    Importance,
    JobPosting,
    SynthConfig,
    Task,
    deduplicate,
    dump_postings,
    generate_synthetic_corpus,
    generate_synthetic_truth,
    load_postings,
)
from .cluster import (
    ClusterConfig,
    EmbeddingProvider,
    HashEmbeddingProvider,
    SkillCluster,
    leader_follower,
    stratified_validation_sample,
    theta_sensitivity_grid,
    validation_report,
    wilson_interval,
)
from .graph import (
    CommunityPartition,
    KnowledgeGraph,
    TopologyStats,
    UndirectedGraph,
    build_graph,
    community_summaries,
    fit_power_law,
    graph_from_edges,
    louvain_partition,
    modularity,
    topology_stats,
)
from .metrics import (
    BridgeSkillMetrics,
    betweenness_centrality,
    connection_pairs,
    rank_bridge_skills,
    skill_importance,
)
from .risk import (
    JobRiskProfile,
    aggregate_by_isco,
    categorize_risk,
    compute_risk,
    heterogeneity_table,
    profile_corpus,
)
from .transitions import (
    ThresholdConfig,
    TransitionNetwork,
    TransitionPathway,
    decompose_transition,
    enumerate_transition_network,
    gap_skill_frequencies,
    is_realistic_transition,
    pairwise_overlap,
    rank_safe_harbors,
    threshold_sensitivity_grid,
    transition_network_stats,
)

__version__ = "0.1.0"
