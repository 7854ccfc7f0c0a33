"""Shared fixtures: a hand-built 6-job corpus whose risk values and skill
neighborhoods are chosen so every transition predicate is easy to verify by
hand. Two High-risk sources (s1, s2), three safer destinations, one decoy.

Neighborhoods (activities):
    s1  rho=90  {a1,a2,a3,a4}
    s2  rho=70  {a1,a2,a3}
    d1  rho=30  {a1,a2,a3,a5}
    d2  rho=40  {a2,a3,a4,a6}
    d3  rho=10  {a1,a2,a3,b01..b17}   (large target: high transfer, low Jaccard)
    j6  rho=0   {a1,a4}

Expected pathways at (tau=3, phi=0.5): s1->{s2,d1,d2,d3}, s2->{d1,d3}.
"""

from __future__ import annotations

import pytest

from jobgraph.cluster import SkillCluster
from jobgraph.corpus import Corpus, Importance, JobPosting, Task
from jobgraph.graph import build_graph
from jobgraph.risk import profile_corpus, profiles_by_id

B_ACTIVITIES = tuple(f"b{i:02d}" for i in range(1, 18))

FIXTURE_JOBS = {
    "s1": ("4110", ("a1", "a2", "a3", "a4"), ((True, "P"), (True, "S"), (False, "A"))),
    "s2": ("4120", ("a1", "a2", "a3"), ((True, "P"), (False, "S"), (True, "A"))),
    "d1": ("3341", ("a1", "a2", "a3", "a5"), ((False, "P"), (True, "S"), (False, "A"))),
    "d2": ("2411", ("a2", "a3", "a4", "a6"), ((False, "P"), (True, "S"), (True, "A"))),
    "d3": ("1211", ("a1", "a2", "a3") + B_ACTIVITIES, ((False, "P"), (False, "S"), (True, "A"))),
    "j6": ("1340", ("a1", "a4"), ((False, "P"),)),
}

FIXTURE_TOOL_MENTIONS = {
    "s1": ("t1", "t2"),
    "s2": ("t1", "t2"),
    "d1": ("t1", "t2"),
    "d2": ("t1", "t2"),
    "d3": ("t1", "t2", "t3"),
    "j6": ("t1",),
}

# Tool co-mention targets: a1 uses t1; a2 uses t1, t2; b01 uses t3.
_ACTIVITY_IDS = ("a1", "a2", "a3", "a4", "a5", "a6") + B_ACTIVITIES
_TOOL_IDS = ("t1", "t2", "t3")


def _identity_cluster(name: str, kind: str) -> SkillCluster:
    return SkillCluster(canonical_id=name, kind=kind, representative=name, members=(name,))


@pytest.fixture(scope="session")
def fixture_corpus() -> Corpus:
    postings = []
    for i, (job_id, (isco4, acts, tasks)) in enumerate(FIXTURE_JOBS.items()):
        postings.append(
            JobPosting(
                id=job_id,
                title=f"{job_id} role",
                employer=f"employer {i}",
                source="wuzzuf",
                isco4=isco4,
                tasks=tuple(
                    Task(f"task {j}", Importance(imp), auto) for j, (auto, imp) in enumerate(tasks)
                ),
                activity_mentions=acts,
                tool_mentions=FIXTURE_TOOL_MENTIONS[job_id],
            )
        )
    return Corpus(tuple(postings), provenance="loaded")


@pytest.fixture(scope="session")
def fixture_clusters():
    activity_clusters = [_identity_cluster(a, "activity") for a in _ACTIVITY_IDS]
    tool_clusters = [_identity_cluster(t, "tool") for t in _TOOL_IDS]
    return activity_clusters, tool_clusters


@pytest.fixture(scope="session")
def fixture_graph(fixture_corpus, fixture_clusters):
    return build_graph(fixture_corpus, *fixture_clusters)


@pytest.fixture(scope="session")
def fixture_risk(fixture_corpus):
    return profiles_by_id(profile_corpus(fixture_corpus))
