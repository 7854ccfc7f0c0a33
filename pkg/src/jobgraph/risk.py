"""Task-weighted automation risk and ISCO-level aggregation.

A job's risk is the importance-weighted share of its automatable tasks,
expressed in [0, 100]. Category mass is 60/30/10 for Primary/Secondary/
Ancillary; each present category's mass is split equally among its tasks and
the masses are renormalized over the categories actually present, so the
weights always sum to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Corpus, Importance, Task
from .errors import EmptyTaskListError, OutOfRangeError

CATEGORY_MASS = {Importance.PRIMARY: 0.6, Importance.SECONDARY: 0.3, Importance.ANCILLARY: 0.1}

HIGH_CUTOFF = 60.0   # rho >= 60 -> High
MEDIUM_CUTOFF = 30.0  # 30 <= rho < 60 -> Medium
SAFE_CUTOFF = 40.0   # rho <= 40 counts as "low" in heterogeneity tables


@dataclass(frozen=True)
class JobRiskProfile:
    job_id: str
    rho: float
    category: str


@dataclass(frozen=True)
class RiskAggregate:
    group_code: str
    n: int
    mean_rho: float
    sigma: float
    high_share: float  # percentage of jobs with rho >= 60


@dataclass(frozen=True)
class HeterogeneityRow:
    isco3: str
    mean_rho: float | None
    high_count: int
    low_count: int
    low_share: float | None  # None when high_count + low_count == 0


def compute_risk(tasks: Sequence[Task]) -> float:
    """Importance-weighted percentage of automatable tasks."""
    if not tasks:
        raise EmptyTaskListError("risk is undefined for an empty task list")
    counts: dict[Importance, int] = {}
    for t in tasks:
        counts[t.importance] = counts.get(t.importance, 0) + 1
    present_mass = sum(CATEGORY_MASS[imp] for imp in counts)
    rho = 0.0
    for t in tasks:
        if t.automatable:
            rho += CATEGORY_MASS[t.importance] / counts[t.importance] / present_mass
    return min(100.0, max(0.0, rho * 100.0))


def categorize_risk(rho: float) -> str:
    if not 0.0 <= rho <= 100.0:
        raise OutOfRangeError(f"rho must be in [0,100], got {rho}")
    if rho >= HIGH_CUTOFF:
        return "High"
    if rho >= MEDIUM_CUTOFF:
        return "Medium"
    return "Low"


def profile_posting(job_id: str, tasks: Sequence[Task]) -> JobRiskProfile:
    rho = compute_risk(tasks)
    return JobRiskProfile(job_id=job_id, rho=rho, category=categorize_risk(rho))


def profile_corpus(corpus: Corpus) -> list[JobRiskProfile]:
    return [profile_posting(p.id, p.tasks) for p in corpus.postings]


def _population_sigma(values: Sequence[float], mean: float) -> float:
    return math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))


def _aggregate(code: str, rhos: Sequence[float]) -> RiskAggregate:
    mean = sum(rhos) / len(rhos)
    return RiskAggregate(
        group_code=code,
        n=len(rhos),
        mean_rho=mean,
        sigma=_population_sigma(rhos, mean),
        high_share=100.0 * sum(1 for r in rhos if r >= HIGH_CUTOFF) / len(rhos),
    )


def aggregate_by_isco(
    profiles: Iterable[JobRiskProfile],
    corpus: Corpus,
    level: int,
    min_n: int = 1,
) -> list[RiskAggregate]:
    """Risk statistics per ISCO prefix of `level` digits, plus a weighted overall row.

    Groups with n < min_n are excluded; rows sort by mean risk descending,
    ties by code ascending. The trailing "ALL" row covers the surviving groups.
    """
    if not 1 <= level <= 4:
        raise OutOfRangeError(f"ISCO level must be 1..4, got {level}")
    isco = corpus.isco_map()
    by_group: dict[str, list[float]] = {}
    for p in profiles:
        by_group.setdefault(isco[p.job_id][:level], []).append(p.rho)
    rows = [
        _aggregate(code, rhos)
        for code, rhos in by_group.items()
        if len(rhos) >= min_n
    ]
    rows.sort(key=lambda r: (-r.mean_rho, r.group_code))
    surviving = [rho for code, rhos in by_group.items() if len(rhos) >= min_n for rho in rhos]
    if surviving:
        rows.append(_aggregate("ALL", surviving))
    return rows


def heterogeneity_table(
    profiles: Iterable[JobRiskProfile],
    corpus: Corpus,
    isco3_codes: Sequence[str],
) -> list[HeterogeneityRow]:
    """Within-group split of clearly-high (rho >= 60) vs clearly-safe (rho <= 40) jobs."""
    for code in isco3_codes:
        if len(code) != 3 or not code.isdigit():
            raise OutOfRangeError(f"isco3 code must be 3 digits, got {code!r}")
    isco = corpus.isco_map()
    by_code: dict[str, list[float]] = {code: [] for code in isco3_codes}
    for p in profiles:
        prefix = isco[p.job_id][:3]
        if prefix in by_code:
            by_code[prefix].append(p.rho)
    rows = []
    for code in isco3_codes:
        rhos = by_code[code]
        high = sum(1 for r in rhos if r >= HIGH_CUTOFF)
        low = sum(1 for r in rhos if r <= SAFE_CUTOFF)
        rows.append(
            HeterogeneityRow(
                isco3=code,
                mean_rho=sum(rhos) / len(rhos) if rhos else None,
                high_count=high,
                low_count=low,
                low_share=low / (high + low) if high + low else None,
            )
        )
    return rows


def heterogeneity_share(high_count: int, low_count: int) -> float | None:
    """Share of clearly-safe jobs among the polarized (high or low) subset."""
    total = high_count + low_count
    return low_count / total if total else None


def profiles_by_id(profiles: Iterable[JobRiskProfile]) -> dict[str, JobRiskProfile]:
    return {p.job_id: p for p in profiles}
