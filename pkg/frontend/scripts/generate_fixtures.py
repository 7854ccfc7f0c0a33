"""Regenerate the UI test fixtures from the Python service.

Run from the repo root after changing the service or the shared 6-job
fixture:  python3 frontend/scripts/generate_fixtures.py
"""

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "tests"))
from conftest import FIXTURE_JOBS, FIXTURE_TOOL_MENTIONS, _ACTIVITY_IDS, _TOOL_IDS, _identity_cluster  # noqa: E402

from jobgraph.corpus import Corpus, Importance, JobPosting, Task
from jobgraph.service import ServiceState, create_app

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def fixture_corpus() -> Corpus:
    postings = []
    for i, (job_id, (isco4, acts, tasks)) in enumerate(FIXTURE_JOBS.items()):
        postings.append(
            JobPosting(
                id=job_id, title=f"{job_id} role", employer=f"employer {i}",
                source="wuzzuf", isco4=isco4,
                tasks=tuple(Task(f"task {j}", Importance(imp), auto) for j, (auto, imp) in enumerate(tasks)),
                activity_mentions=acts, tool_mentions=FIXTURE_TOOL_MENTIONS[job_id],
            )
        )
    return Corpus(tuple(postings), provenance="loaded")


def main() -> None:
    state = ServiceState.from_components(
        fixture_corpus(),
        [_identity_cluster(a, "activity") for a in _ACTIVITY_IDS],
        [_identity_cluster(t, "tool") for t in _TOOL_IDS],
        seed=1,
    )
    client = TestClient(create_app(state))
    captures = {
        "meta.json": client.get("/meta"),
        "jobs_query_s.json": client.get("/jobs", params={"query": "s"}),
        "jobs_all.json": client.get("/jobs", params={"limit": 100}),
        "job_detail_s1.json": client.get("/jobs/s1"),
        "job_detail_s2.json": client.get("/jobs/s2"),
        "job_detail_d1.json": client.get("/jobs/d1"),
        "job_detail_d3.json": client.get("/jobs/d3"),
        "transitions_s2_tau3_phi05.json": client.get("/jobs/s2/transitions", params={"tau": 3, "phi": 0.5}),
        "transitions_s1_tau3_phi05.json": client.get("/jobs/s1/transitions", params={"tau": 3, "phi": 0.5}),
        "transitions_s1_tau3_phi075.json": client.get("/jobs/s1/transitions", params={"tau": 3, "phi": 0.75}),
        "transitions_s2_tau5_phi05.json": client.get("/jobs/s2/transitions", params={"tau": 5, "phi": 0.5}),
        "whatif_s2_profile.json": client.post(
            "/what-if", json={"activities": ["a1", "a2", "a3"], "rho": 70.0, "tau": 3, "phi": 0.5}
        ),
        "sensitivity.json": client.get("/sensitivity"),
    }
    OUT.mkdir(parents=True, exist_ok=True)
    for name, resp in captures.items():
        assert resp.status_code == 200, (name, resp.status_code)
        (OUT / name).write_text(json.dumps(resp.json(), indent=2, sort_keys=True) + "\n")
        print(f"wrote {name}")


if __name__ == "__main__":
    main()
