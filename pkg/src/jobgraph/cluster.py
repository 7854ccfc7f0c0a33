"""Entity resolution: leader-follower clustering over embeddings, plus the
stratified validation machinery (sampling, three-tier judgments, Wilson CIs).

Clustering is a single pass in input order. Each form is compared against the
leaders of all existing clusters; it joins the most similar leader whose
cosine similarity strictly exceeds theta, otherwise it founds a new cluster.
Leaders never move or re-embed.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BadConfigError,
    BadCountsError,
    EmptyLabelsError,
    MissingJudgmentError,
    ProviderFailureError,
)
from .surface import normalize_surface

DEFAULT_THETA = 0.88

JUDGMENT_TIERS = ("CORRECT", "MINOR", "MAJOR")
SIZE_BANDS = ("2", "3-5", "6-10", "11+")


class EmbeddingProvider:
    """Deterministic text-to-unit-vector mapping. Subclasses define `embed`."""

    dimension: int

    def embed(self, text: str) -> np.ndarray:
        raise NotImplementedError


class HashEmbeddingProvider(EmbeddingProvider):
    """Offline stand-in for a sentence-embedding model.

    Every surface form maps to a base vector seeded by its normalized spelling
    plus a small orthogonal perturbation seeded by the raw text. Variants of
    one canonical therefore sit at cosine >= (1 - eps^2)/(1 + eps^2) ~ 0.956
    of each other, while unrelated canonicals land near orthogonal. This gives
    clustering tests a provider with known separation, not a claim about any
    real embedding model.
    """

    def __init__(self, dimension: int = 768, perturbation: float = 0.15):
        if dimension < 8:
            raise BadConfigError("dimension must be >= 8")
        self.dimension = dimension
        self.perturbation = perturbation
        self._cache: dict[str, np.ndarray] = {}

    def _seeded_unit(self, salt: str, key: str) -> np.ndarray:
        digest = hashlib.sha256(f"{salt}:{key}".encode("utf-8")).digest()
        rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
        v = rng.standard_normal(self.dimension)
        return v / np.linalg.norm(v)

    def embed(self, text: str) -> np.ndarray:
        cached = self._cache.get(text)
        if cached is not None:
            return cached
        base = self._seeded_unit("base", normalize_surface(text))
        noise = self._seeded_unit("noise", text)
        noise -= (noise @ base) * base
        norm = np.linalg.norm(noise)
        if norm > 0:
            noise /= norm
        v = base + self.perturbation * noise
        v /= np.linalg.norm(v)
        self._cache[text] = v
        return v


class StaticProvider(EmbeddingProvider):
    """Fixed text->vector table; raises ProviderFailureError on unknown text."""

    def __init__(self, table: Mapping[str, Sequence[float]]):
        vectors = {k: np.asarray(v, dtype=float) for k, v in table.items()}
        dims = {v.shape[0] for v in vectors.values()}
        if len(dims) != 1:
            raise BadConfigError("all vectors must share one dimension")
        self.dimension = dims.pop()
        self._table = {k: v / np.linalg.norm(v) for k, v in vectors.items()}

    def embed(self, text: str) -> np.ndarray:
        try:
            return self._table[text]
        except KeyError:
            raise ProviderFailureError(f"no vector for {text!r}") from None


@dataclass(frozen=True)
class SkillCluster:
    canonical_id: str
    kind: str  # "activity" | "tool"
    representative: str
    members: tuple[str, ...]


@dataclass(frozen=True)
class ClusterConfig:
    theta: float = DEFAULT_THETA
    assignment: str = "best_leader"

    def validate(self) -> None:
        if not -1.0 <= self.theta <= 1.0:
            raise BadConfigError(f"theta must be in [-1,1], got {self.theta}")
        if self.assignment != "best_leader":
            raise BadConfigError(f"unknown assignment policy {self.assignment!r}")


def leader_follower(
    surface_forms: Sequence[str],
    provider: EmbeddingProvider,
    cfg: ClusterConfig | None = None,
    kind: str = "activity",
) -> list[SkillCluster]:
    """Single-pass clustering; joins require similarity strictly above theta."""
    cfg = cfg or ClusterConfig()
    cfg.validate()
    if len(set(surface_forms)) != len(surface_forms):
        raise BadConfigError("surface forms must be pre-deduplicated")
    prefix = kind[0]
    leader_vecs: list[np.ndarray] = []
    members: list[list[str]] = []
    leader_matrix: np.ndarray | None = None
    for form in surface_forms:
        v = provider.embed(form)
        if leader_vecs:
            if leader_matrix is None or leader_matrix.shape[0] != len(leader_vecs):
                leader_matrix = np.vstack(leader_vecs)
            sims = leader_matrix @ v
            best = int(np.argmax(sims))
            if sims[best] > cfg.theta:
                members[best].append(form)
                continue
        leader_vecs.append(v)
        members.append([form])
    return [
        SkillCluster(
            canonical_id=f"{prefix}{i:05d}",
            kind=kind,
            representative=group[0],
            members=tuple(group),
        )
        for i, group in enumerate(members)
    ]


def clusters_from_truth(
    variant_map: Mapping[str, Sequence[str]], kind: str
) -> list[SkillCluster]:
    """Exact clusters from a ground-truth canonical->variants map."""
    prefix = kind[0]
    return [
        SkillCluster(
            canonical_id=f"{prefix}{i:05d}",
            kind=kind,
            representative=canonical,
            members=tuple(dict.fromkeys([*variants])),
        )
        for i, (canonical, variants) in enumerate(sorted(variant_map.items()))
    ]


def membership_map(clusters: Iterable[SkillCluster]) -> dict[str, str]:
    """Surface form -> canonical cluster id."""
    out: dict[str, str] = {}
    for c in clusters:
        for m in c.members:
            out[m] = c.canonical_id
    return out


def pair_scores(
    clusters: Sequence[SkillCluster],
    labeled_pairs: Sequence[tuple[str, str, bool]],
) -> tuple[float | None, float | None]:
    """Pair-level precision/recall: a pair counts merged iff both forms share a cluster."""
    member_of = membership_map(clusters)
    merged = 0
    merged_correct = 0
    positives = 0
    for a, b, same_concept in labeled_pairs:
        positives += same_concept
        if member_of.get(a) is not None and member_of.get(a) == member_of.get(b):
            merged += 1
            merged_correct += same_concept
    precision = merged_correct / merged if merged else None
    recall = merged_correct / positives if positives else None
    return precision, recall


@dataclass(frozen=True)
class ThetaGridRow:
    theta: float
    n_clusters: int
    precision: float | None
    recall: float | None


def theta_sensitivity_grid(
    forms: Sequence[str],
    provider: EmbeddingProvider,
    labeled_pairs: Sequence[tuple[str, str, bool]],
    lo: float = 0.80,
    hi: float = 0.95,
    step: float = 0.01,
) -> list[ThetaGridRow]:
    """Re-cluster at each threshold in [lo, hi] and score against labeled pairs."""
    if not labeled_pairs:
        raise EmptyLabelsError("labeled pair set is empty")
    if step <= 0 or lo > hi:
        raise BadConfigError("need lo <= hi and step > 0")
    known = set(forms)
    for a, b, _ in labeled_pairs:
        if a not in known or b not in known:
            raise BadConfigError(f"labeled pair references unknown form {a!r}/{b!r}")
    n_steps = int(round((hi - lo) / step))
    rows = []
    for i in range(n_steps + 1):
        theta = round(lo + i * step, 10)
        clusters = leader_follower(forms, provider, ClusterConfig(theta=theta))
        precision, recall = pair_scores(clusters, labeled_pairs)
        rows.append(ThetaGridRow(theta, len(clusters), precision, recall))
    return rows


# -- validation protocol ------------------------------------------------------

def size_band(n_members: int) -> str | None:
    """Band label for a cluster, or None for singletons (not validated)."""
    if n_members <= 1:
        return None
    if n_members == 2:
        return "2"
    if n_members <= 5:
        return "3-5"
    if n_members <= 10:
        return "6-10"
    return "11+"


@dataclass(frozen=True)
class StratumSample:
    kind: str
    band: str
    population: int
    sampled: tuple[SkillCluster, ...]


def stratified_validation_sample(
    clusters: Sequence[SkillCluster],
    plan_sizes: Mapping[tuple[str, str], int],
    seed: int,
) -> list[StratumSample]:
    """Uniform without-replacement sample per (kind, size-band) stratum.

    Requested sizes are capped at the stratum population; singleton clusters
    are outside every stratum. Reproducible for a fixed seed.
    """
    strata: dict[tuple[str, str], list[SkillCluster]] = {}
    for c in clusters:
        band = size_band(len(c.members))
        if band is not None:
            strata.setdefault((c.kind, band), []).append(c)
    rng = random.Random(seed)
    samples = []
    for key in sorted(strata):
        population = sorted(strata[key], key=lambda c: c.canonical_id)
        requested = min(plan_sizes.get(key, 0), len(population))
        kind, band = key
        samples.append(
            StratumSample(
                kind=kind,
                band=band,
                population=len(population),
                sampled=tuple(rng.sample(population, requested)),
            )
        )
    return samples


def wilson_interval(errors: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion, clamped to [0, 1]."""
    if n < 1 or errors < 0 or errors > n:
        raise BadCountsError(f"need 0 <= errors <= n and n >= 1, got errors={errors} n={n}")
    if z <= 0:
        raise BadCountsError(f"z must be positive, got {z}")
    p_hat = errors / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p_hat + z2 / (2 * n)) / denom
    half = z * math.sqrt(p_hat * (1 - p_hat) / n + z2 / (4 * n * n)) / denom
    # the interval always contains p_hat in exact arithmetic; guard FP noise
    lo = min(max(0.0, center - half), p_hat)
    hi = max(min(1.0, center + half), p_hat)
    return lo, hi


@dataclass(frozen=True)
class ValidationRow:
    kind: str
    band: str
    samples: int
    correct: int
    minor: int
    major: int
    error_rate: float  # major / samples


@dataclass(frozen=True)
class ValidationReport:
    rows: tuple[ValidationRow, ...]                       # per (kind, band)
    subtotals: tuple[tuple[ValidationRow, tuple[float, float]], ...]  # per kind, with CI
    total: ValidationRow
    total_ci: tuple[float, float]


def _tally(kind: str, band: str, tiers: Sequence[str]) -> ValidationRow:
    correct = sum(1 for t in tiers if t == "CORRECT")
    minor = sum(1 for t in tiers if t == "MINOR")
    major = sum(1 for t in tiers if t == "MAJOR")
    n = len(tiers)
    return ValidationRow(kind, band, n, correct, minor, major, major / n if n else 0.0)


def validation_report(
    samples: Sequence[StratumSample],
    judgments: Mapping[str, str],
    z: float = 1.96,
) -> ValidationReport:
    """Roll up per-cluster judgments into stratum, per-kind, and combined rows.

    Error rate counts MAJOR only; MINOR is recorded but does not affect it.
    """
    per_stratum: list[ValidationRow] = []
    by_kind: dict[str, list[str]] = {}
    all_tiers: list[str] = []
    for s in samples:
        tiers = []
        for c in s.sampled:
            tier = judgments.get(c.canonical_id)
            if tier is None:
                raise MissingJudgmentError(c.canonical_id)
            if tier not in JUDGMENT_TIERS:
                raise BadCountsError(f"unknown judgment tier {tier!r}")
            tiers.append(tier)
        per_stratum.append(_tally(s.kind, s.band, tiers))
        by_kind.setdefault(s.kind, []).extend(tiers)
        all_tiers.extend(tiers)
    subtotals = []
    for kind in sorted(by_kind):
        row = _tally(kind, "all", by_kind[kind])
        ci = wilson_interval(row.major, row.samples, z) if row.samples else (0.0, 0.0)
        subtotals.append((row, ci))
    total = _tally("combined", "all", all_tiers)
    total_ci = wilson_interval(total.major, total.samples, z) if total.samples else (0.0, 0.0)
    return ValidationReport(tuple(per_stratum), tuple(subtotals), total, total_ci)


def judge_against_truth(
    samples: Sequence[StratumSample],
    variant_to_canonical: Mapping[str, str],
) -> dict[str, str]:
    """Auto-judge sampled clusters with synthetic ground truth.

    A cluster is CORRECT when all members share one true canonical, MAJOR
    otherwise; the MINOR tier needs human nuance and never fires here.
    """
    judgments: dict[str, str] = {}
    for s in samples:
        for c in s.sampled:
            canonicals = {variant_to_canonical.get(m) for m in c.members}
            judgments[c.canonical_id] = "CORRECT" if len(canonicals) == 1 and None not in canonicals else "MAJOR"
    return judgments
