"""Read-only query service over a built artifact bundle.

Loads the corpus + cluster artifacts a pipeline run produced, rebuilds the
graph and risk profiles in memory (both are pure functions of the artifacts),
and answers transition queries at request-supplied thresholds. Responses are
pure functions of (bundle, query); there is no mutable state.

Error payloads carry machine-readable codes:
    {"error": {"code": "unknown_job", "detail": "..."}}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import pipeline as pl
from .corpus import Corpus, load_postings
from .graph import CommunityPartition, KnowledgeGraph, build_graph, louvain_partition
from .metrics import rank_bridge_skills
from .risk import JobRiskProfile, profile_corpus, profiles_by_id
from .transitions import (
    ThresholdConfig,
    enumerate_transition_network,
    rank_safe_harbors,
    threshold_sensitivity_grid,
)

DEFAULT_LIMIT = 50


class ApiError(Exception):
    def __init__(self, status: int, code: str, detail: str):
        super().__init__(detail)
        self.status = status
        self.code = code
        self.detail = detail


class WhatIfRequest(BaseModel):
    activities: list[str]
    rho: float | None = None
    tau: int = 3
    phi: float | None = 0.5


@dataclass
class ServiceState:
    corpus: Corpus
    graph: KnowledgeGraph
    risk: Mapping[str, JobRiskProfile]
    partition: CommunityPartition
    default_threshold: ThresholdConfig
    sensitivity_rows: list[dict[str, Any]]
    digest: str
    seed: int

    @classmethod
    def from_components(
        cls,
        corpus: Corpus,
        activity_clusters,
        tool_clusters,
        seed: int = 0,
        default_threshold: ThresholdConfig = ThresholdConfig(),
        digest: str = "unversioned",
    ) -> "ServiceState":
        g = build_graph(corpus, activity_clusters, tool_clusters)
        risk = profiles_by_id(profile_corpus(corpus))
        partition = louvain_partition(g, seed=seed)
        rows = [
            {
                "config": row.config.describe(),
                "tau": row.config.tau,
                "phi": row.config.phi,
                "n_pathways": row.n_pathways,
                "mean_shared": row.mean_shared,
                "mean_transfer": row.mean_transfer,
                "unique_sources": row.unique_sources,
                "coverage": row.coverage,
            }
            for row in threshold_sensitivity_grid(g, risk)
        ]
        return cls(corpus, g, risk, partition, default_threshold, rows, digest, seed)

    @classmethod
    def load(cls, artifact_dir: str | Path) -> "ServiceState":
        out = Path(artifact_dir)
        corpus = load_postings(out / "corpus.jsonl")
        activities, tools = pl.load_clusters(out / "clusters.json")
        config = json.loads((out / "config.json").read_text(encoding="utf-8"))
        digest = "unversioned"
        manifest_path = out / "manifest.json"
        if manifest_path.exists():
            digest = pl.rpt.digest_of(manifest_path.read_bytes())
        threshold = ThresholdConfig(
            tau=int(config["threshold"]["tau"]),
            phi=None if config["threshold"]["phi"] is None else float(config["threshold"]["phi"]),
        )
        return cls.from_components(
            corpus, activities, tools,
            seed=int(config.get("seed", 0)),
            default_threshold=threshold,
            digest=digest,
        )


def _validate_thresholds(tau: int, phi: float | None) -> ThresholdConfig:
    try:
        cfg = ThresholdConfig(tau=tau, phi=phi)
        cfg.validate()
    except Exception as exc:
        raise ApiError(422, "bad_thresholds", str(exc)) from None
    return cfg


def _validate_paging(limit: int, offset: int) -> tuple[int, int]:
    if limit < 1 or offset < 0:
        raise ApiError(422, "bad_paging", "need limit >= 1 and offset >= 0")
    return limit, offset


def _job_summary(state: ServiceState, job_id: str) -> dict[str, Any]:
    p = state.corpus.posting(job_id)
    r = state.risk[job_id]
    return {
        "id": job_id,
        "title": p.title,
        "isco4": p.isco4,
        "rho": r.rho,
        "category": r.category,
    }


def _destinations(
    state: ServiceState,
    activities: frozenset[str],
    rho_source: float | None,
    cfg: ThresholdConfig,
    exclude: str | None = None,
) -> list[dict[str, Any]]:
    """Feasible destinations for a (possibly synthetic) source neighborhood."""
    g = state.graph
    items = []
    for t in g.job_ids:
        if t == exclude:
            continue
        n_t = g.neighborhood(t)
        rho_t = state.risk[t].rho
        if rho_source is not None and not rho_t < rho_source:
            continue
        shared = activities & n_t
        if len(shared) < cfg.tau:
            continue
        transfer = len(shared) / len(activities)
        if cfg.phi is not None and transfer < cfg.phi:
            continue
        gap = n_t - activities
        items.append(
            {
                "target": t,
                "target_label": g.labels[t],
                "rho_target": rho_t,
                "delta_rho": rho_t - rho_source if rho_source is not None else None,
                "shared": sorted(shared),
                "shared_count": len(shared),
                "transfer": transfer,
                "jaccard": len(shared) / len(activities | n_t),
                "gap": [{"id": a, "label": g.labels[a]} for a in sorted(gap)],
            }
        )
    if rho_source is not None:
        items.sort(key=lambda d: (d["delta_rho"], d["target"]))
    else:
        items.sort(key=lambda d: (d["rho_target"], d["target"]))
    return items


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="jobgraph query service", version="0.1.0")

    @app.exception_handler(ApiError)
    async def api_error_handler(_: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "detail": exc.detail}},
        )

    @app.get("/meta")
    def meta():
        return {
            "digest": state.digest,
            "seed": state.seed,
            "n_jobs": len(state.graph.job_ids),
            "n_activities": len(state.graph.activity_ids),
            "n_tools": len(state.graph.tool_ids),
            "defaults": {
                "tau": state.default_threshold.tau,
                "phi": state.default_threshold.phi,
            },
        }

    @app.get("/jobs")
    def search_jobs(query: str = "", limit: int = DEFAULT_LIMIT, offset: int = 0):
        limit, offset = _validate_paging(limit, offset)
        needle = query.lower()
        matches = [
            j for j in state.graph.job_ids
            if needle in state.corpus.posting(j).title.lower() or needle in j.lower()
        ]
        return {
            "total": len(matches),
            "items": [_job_summary(state, j) for j in matches[offset : offset + limit]],
        }

    @app.get("/jobs/{job_id}")
    def job_detail(job_id: str):
        if job_id not in state.risk:
            raise ApiError(404, "unknown_job", f"no job {job_id!r}")
        g = state.graph
        p = state.corpus.posting(job_id)
        summary = _job_summary(state, job_id)
        summary["employer"] = p.employer
        summary["activities"] = [
            {"id": a, "label": g.labels[a]} for a in sorted(g.neighborhood(job_id))
        ]
        summary["tools"] = [
            {"id": t, "label": g.labels[t]} for t in sorted(g.job_tools(job_id))
        ]
        return summary

    @app.get("/jobs/{job_id}/transitions")
    def job_transitions(
        job_id: str,
        tau: int = 3,
        phi: float | None = 0.5,
        limit: int = DEFAULT_LIMIT,
        offset: int = 0,
    ):
        if job_id not in state.risk:
            raise ApiError(404, "unknown_job", f"no job {job_id!r}")
        cfg = _validate_thresholds(tau, phi)
        limit, offset = _validate_paging(limit, offset)
        n_s = state.graph.neighborhood(job_id)
        items = (
            _destinations(state, n_s, state.risk[job_id].rho, cfg, exclude=job_id)
            if n_s
            else []
        )
        return {
            "source": job_id,
            "tau": cfg.tau,
            "phi": cfg.phi,
            "risk_filtered": True,
            "total": len(items),
            "items": items[offset : offset + limit],
        }

    @app.post("/what-if")
    def what_if(body: WhatIfRequest, limit: int = DEFAULT_LIMIT, offset: int = 0):
        if not body.activities:
            raise ApiError(422, "empty_profile", "profile needs at least one activity")
        known = set(state.graph.activity_ids)
        unknown = [a for a in body.activities if a not in known]
        if unknown:
            raise ApiError(422, "unknown_activity", f"unknown activities: {unknown}")
        cfg = _validate_thresholds(body.tau, body.phi)
        limit, offset = _validate_paging(limit, offset)
        items = _destinations(state, frozenset(body.activities), body.rho, cfg)
        return {
            "tau": cfg.tau,
            "phi": cfg.phi,
            "risk_filtered": body.rho is not None,
            "total": len(items),
            "items": items[offset : offset + limit],
        }

    @app.get("/skills/bridge")
    def bridge_skills(top: int = 25):
        if top < 1:
            raise ApiError(422, "bad_paging", "need top >= 1")
        ranked = rank_bridge_skills(
            state.graph, state.partition, state.corpus.isco_map(), state.risk, top_n=top
        )
        return {
            "items": [
                {
                    "activity": r.activity_id,
                    "label": r.label,
                    "c_b": r.c_b,
                    "c_p": r.c_p,
                    "k": r.k,
                    "d_isco": r.d_isco,
                    "i_pr": r.i_pr,
                    "mean_rho": r.mean_rho,
                    "tier": r.tier,
                }
                for r in ranked
            ]
        }

    @app.get("/safe-harbors")
    def safe_harbors(top: int = 20):
        if top < 1:
            raise ApiError(422, "bad_paging", "need top >= 1")
        tn = enumerate_transition_network(state.graph, state.risk, state.default_threshold)
        entries = rank_safe_harbors(state.graph, tn, state.risk, top_k=top)
        return {
            "items": [
                {
                    "target": e.target_job,
                    "label": e.label,
                    "rho": e.rho,
                    "k_in": e.k_in,
                    "mean_jaccard": e.mean_jaccard,
                    "n_activities": e.n_activities,
                    "bridge": e.bridge,
                }
                for e in entries
            ]
        }

    @app.get("/sensitivity")
    def sensitivity():
        return {"items": state.sensitivity_rows}

    return app


def serve_artifact(artifact_dir: str | Path, host: str = "127.0.0.1", port: int = 8000) -> None:
    import uvicorn

    state = ServiceState.load(artifact_dir)
    uvicorn.run(create_app(state), host=host, port=port)
