"""Command-line entry point.

Subcommands run individual pipeline stages against cached artifacts in the
output directory; ``report`` runs the whole pipeline and writes the manifest.
Exit codes: 0 success, 1 configuration error, 2 data error (bad corpus record,
unresolved mention, and similar).

Flag overrides beat config values; environment variables with the ``JOBGRAPH_``
prefix (JOBGRAPH_SEED, JOBGRAPH_OUT, JOBGRAPH_FORMAT) sit between the two.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import pipeline as pl
from . import report as rpt
from .errors import BadConfigError, JobgraphError
from .corpus import dump_postings, load_postings
from .graph import build_graph, louvain_partition
from .risk import profile_corpus, profiles_by_id

ENV_PREFIX = "JOBGRAPH_"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2

STAGES = (
    "ingest", "cluster", "graph", "analyze", "transitions",
    "sensitivity", "validate", "report", "serve",
)


def _overrides(args: argparse.Namespace) -> dict:
    env = {
        "seed": os.environ.get(f"{ENV_PREFIX}SEED"),
        "out_dir": os.environ.get(f"{ENV_PREFIX}OUT"),
        "fmt": os.environ.get(f"{ENV_PREFIX}FORMAT"),
    }
    out = {k: v for k, v in env.items() if v is not None}
    if args.seed is not None:
        out["seed"] = args.seed
    if args.out is not None:
        out["out_dir"] = args.out
    if args.format is not None:
        out["fmt"] = args.format
    if "seed" in out:
        out["seed"] = int(out["seed"])
    return out


def _load_stage_inputs(cfg: pl.PipelineConfig):
    out = Path(cfg.out_dir)
    corpus = load_postings(out / "corpus.jsonl")
    activities, tools = pl.load_clusters(out / "clusters.json")
    return corpus, activities, tools


def _run_stage(stage: str, cfg: pl.PipelineConfig) -> None:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if stage == "report":
        result = pl.run_pipeline(cfg)
        print(f"report bundle in {result.out_dir} (manifest {result.manifest_digest[:12]})")
        return
    if stage == "ingest":
        corpus = pl.stage_ingest(cfg)
        dump_postings(corpus, out / "corpus.jsonl")
        print(f"{len(corpus.postings)} postings -> {out / 'corpus.jsonl'}")
        return
    if stage == "cluster":
        corpus = load_postings(out / "corpus.jsonl")
        activities, tools = pl.stage_cluster(cfg, corpus)
        pl.save_clusters(out, cfg.theta, activities, tools)
        rpt.emit_tables([pl.theta_grid_table(cfg, corpus)], out, cfg.fmt)
        print(f"{len(activities)} activity / {len(tools)} tool clusters -> {out / 'clusters.json'}")
        return
    if stage == "validate":
        corpus, activities, tools = _load_stage_inputs(cfg)
        rpt.emit_tables(pl.validation_tables(cfg, activities, tools), out, cfg.fmt)
        print(f"validation tables -> {out}")
        return

    corpus, activities, tools = _load_stage_inputs(cfg)
    g = build_graph(corpus, activities, tools)
    profiles = profile_corpus(corpus)
    risk_map = profiles_by_id(profiles)
    if stage == "graph":
        partition = louvain_partition(g, seed=cfg.seed)
        rpt.emit_tables(pl.graph_tables(g, partition), out, cfg.fmt)
        print(f"graph tables -> {out}")
    elif stage == "analyze":
        partition = louvain_partition(g, seed=cfg.seed)
        tables = pl.risk_tables(cfg, corpus, profiles)
        tables.append(pl.community_table(g, partition, risk_map))
        tables.append(pl.bridge_table(cfg, g, partition, corpus, risk_map))
        rpt.emit_tables(tables, out, cfg.fmt)
        print(f"analysis tables -> {out}")
    elif stage == "transitions":
        rpt.emit_tables(pl.transition_tables(cfg, g, risk_map), out, cfg.fmt)
        print(f"transition tables -> {out}")
    elif stage == "sensitivity":
        rpt.emit_tables([pl.sensitivity_table(cfg, g, risk_map)], out, cfg.fmt)
        print(f"sensitivity grid -> {out}")
    elif stage == "serve":
        from .service import serve_artifact

        serve_artifact(cfg.out_dir, host="127.0.0.1", port=8000)
    else:
        raise BadConfigError(f"unknown stage {stage!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jobgraph",
        description="Labor-market knowledge graph pipeline and analysis reports",
    )
    parser.add_argument("stage", choices=STAGES, help="pipeline stage to run")
    parser.add_argument("--config", required=True, help="path to the JSON pipeline config")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--out", default=None, help="override the output directory")
    parser.add_argument("--format", choices=("csv", "structured"), default=None,
                        help="report file format (csv or structured JSON)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = pl.load_config(args.config, _overrides(args))
    except BadConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        _run_stage(args.stage, cfg)
    except BadConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (JobgraphError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
