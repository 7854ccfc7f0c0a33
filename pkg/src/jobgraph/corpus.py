"""Job-posting corpora: ingestion, de-duplication, and synthetic generation.

Corpus files are UTF-8 JSON Lines, one posting per line:

    {"id": ..., "title": ..., "employer": ..., "source": ...,
     "isco4": "NNNN",
     "tasks": [{"description": ..., "importance": "P"|"S"|"A",
                "automatable": true|false}, ...],
     "activities": [...], "tools": [...]}

The synthetic generator produces corpora whose activity/tool mentions are
surface variants of known canonical entities, so downstream clustering can be
scored against ground truth. The variant-to-canonical map never enters the
corpus itself; ``generate_synthetic_truth`` rebuilds it from the same config.
"""

from __future__ import annotations

import enum
import json
import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadConfigError,
    BadIscoError,
    DuplicateIdError,
    MalformedRecordError,
    MissingFieldError,
)
from .surface import VARIANT_STYLES, apply_variant

_ISCO4_RE = re.compile(r"^[0-9]{4}$")
_TITLE_PUNCT_RE = re.compile(r"[^a-z0-9\s]+")

MAX_TASKS = 15
SOURCES = ("wuzzuf", "linkedin", "forasna", "synthetic")


class Importance(enum.Enum):
    PRIMARY = "P"
    SECONDARY = "S"
    ANCILLARY = "A"


@dataclass(frozen=True)
class Task:
    description: str
    importance: Importance
    automatable: bool


@dataclass(frozen=True)
class JobPosting:
    id: str
    title: str
    employer: str
    source: str
    isco4: str
    tasks: tuple[Task, ...]
    activity_mentions: tuple[str, ...]
    tool_mentions: tuple[str, ...]


@dataclass(frozen=True)
class Corpus:
    postings: tuple[JobPosting, ...]
    provenance: str = "loaded"
    seed: int | None = None

    def posting(self, posting_id: str) -> JobPosting:
        for p in self.postings:
            if p.id == posting_id:
                return p
        raise KeyError(posting_id)

    def isco_map(self) -> dict[str, str]:
        return {p.id: p.isco4 for p in self.postings}


def _posting_from_record(record: dict, line_no: int) -> JobPosting:
    for key in ("id", "title", "employer", "source", "isco4", "tasks"):
        if key not in record or record[key] is None:
            raise MissingFieldError(line_no, key)
    if record["source"] not in SOURCES:
        raise MalformedRecordError(line_no, f"unknown source {record['source']!r}")
    isco4 = str(record["isco4"])
    if not _ISCO4_RE.match(isco4):
        raise BadIscoError(line_no, isco4)
    raw_tasks = record["tasks"]
    if not isinstance(raw_tasks, list) or not (1 <= len(raw_tasks) <= MAX_TASKS):
        raise MalformedRecordError(
            line_no, f"tasks must hold 1..{MAX_TASKS} entries, got {len(raw_tasks) if isinstance(raw_tasks, list) else type(raw_tasks).__name__}"
        )
    tasks = []
    for t in raw_tasks:
        for key in ("description", "importance", "automatable"):
            if not isinstance(t, dict) or key not in t:
                raise MissingFieldError(line_no, f"tasks[].{key}")
        try:
            importance = Importance(t["importance"])
        except ValueError:
            raise MalformedRecordError(
                line_no, f"importance must be P|S|A, got {t['importance']!r}"
            ) from None
        tasks.append(Task(str(t["description"]), importance, bool(t["automatable"])))
    return JobPosting(
        id=str(record["id"]),
        title=str(record["title"]),
        employer=str(record["employer"]),
        source=str(record["source"]),
        isco4=isco4,
        tasks=tuple(tasks),
        activity_mentions=tuple(str(a) for a in record.get("activities", [])),
        tool_mentions=tuple(str(t) for t in record.get("tools", [])),
    )


def load_postings(path: str | Path) -> Corpus:
    """Parse a JSONL corpus file; every record must satisfy posting invariants."""
    postings: list[JobPosting] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecordError(line_no, f"invalid JSON: {exc.msg}") from None
            if not isinstance(record, dict):
                raise MalformedRecordError(line_no, "record must be an object")
            posting = _posting_from_record(record, line_no)
            if posting.id in seen:
                raise DuplicateIdError(posting.id)
            seen.add(posting.id)
            postings.append(posting)
    return Corpus(postings=tuple(postings), provenance="loaded", seed=None)


def posting_to_record(p: JobPosting) -> dict:
    return {
        "id": p.id,
        "title": p.title,
        "employer": p.employer,
        "source": p.source,
        "isco4": p.isco4,
        "tasks": [
            {
                "description": t.description,
                "importance": t.importance.value,
                "automatable": t.automatable,
            }
            for t in p.tasks
        ],
        "activities": list(p.activity_mentions),
        "tools": list(p.tool_mentions),
    }


def dump_postings(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back out in the ingestion format (one JSON object per line)."""
    with open(path, "w", encoding="utf-8") as fh:
        for p in corpus.postings:
            fh.write(json.dumps(posting_to_record(p), sort_keys=True))
            fh.write("\n")


def title_tokens(title: str) -> frozenset[str]:
    return frozenset(_TITLE_PUNCT_RE.sub(" ", title.lower()).split())


def title_jaccard(a: str, b: str) -> float:
    ta, tb = title_tokens(a), title_tokens(b)
    if not ta and not tb:
        return 1.0
    union = ta | tb
    return len(ta & tb) / len(union)


def deduplicate(corpus: Corpus, title_threshold: float = 0.85) -> Corpus:
    """Collapse same-employer postings whose title Jaccard strictly exceeds the threshold.

    The first-seen posting of each near-duplicate group survives; output order
    is the input order of survivors.
    """
    if not 0.0 <= title_threshold <= 1.0:
        raise BadConfigError(f"title_threshold must be in [0,1], got {title_threshold}")
    kept_by_employer: dict[str, list[JobPosting]] = {}
    survivors: list[JobPosting] = []
    for p in corpus.postings:
        peers = kept_by_employer.setdefault(p.employer, [])
        if any(title_jaccard(p.title, q.title) > title_threshold for q in peers):
            continue
        peers.append(p)
        survivors.append(p)
    return Corpus(tuple(survivors), provenance=corpus.provenance, seed=corpus.seed)


# -- synthetic corpora --------------------------------------------------------

_ACTIVITY_HEADS = (
    "budget", "inventory", "campaign", "contract", "client", "shift", "quality",
    "report", "data", "policy", "vendor", "payroll", "audit", "recruitment",
    "logistics", "pricing", "risk", "compliance", "training", "procurement",
)
_ACTIVITY_TAILS = (
    "planning", "management", "analysis", "coordination", "review",
    "forecasting", "administration", "negotiation", "development", "auditing",
    "reporting", "supervision", "documentation", "optimization", "inspection",
    "sourcing", "modeling", "evaluation", "scheduling", "support",
)
_TOOL_HEADS = (
    "ledger", "flow", "pivot", "stack", "grid", "forge", "pulse", "quill",
    "beacon", "crest", "atlas", "prism", "vault", "orbit", "ridge", "drift",
    "ember", "haven", "lumen", "strata",
)
_TOOL_TAILS = (
    "desk", "base", "suite", "works", "hub", "soft", "cloud", "track", "mate",
    "core", "line", "book", "port", "cast", "deck", "node", "form", "kit",
    "lab", "wise",
)
_TASK_VERBS = (
    "prepare", "review", "enter", "reconcile", "draft", "verify", "compile",
    "schedule", "approve", "archive", "inspect", "route",
)
_TASK_OBJECTS = (
    "invoices", "ledgers", "orders", "contracts", "reports", "records",
    "shipments", "claims", "budgets", "timesheets", "manifests", "briefs",
)
_EMPLOYERS = (
    "nile analytics", "delta foods", "cairo logistics", "pharos retail",
    "lotus textiles", "oasis telecom", "sphinx engineering", "aswan energy",
    "rosetta media", "karnak finance", "memphis pharma", "luxor hospitality",
    "giza construction", "sinai mining", "alexandria shipping", "tanta agro",
    "port said trading", "suez chemicals", "minya software", "zagazig motors",
    "damietta furniture", "fayoum dairy", "qena packaging", "assiut cables",
)
_TITLE_ROLES = {
    "1": ("operations manager", "branch manager", "finance manager", "hr manager", "program director"),
    "2": ("software engineer", "financial analyst", "architect", "marketing specialist", "accountant"),
    "3": ("lab technician", "sales supervisor", "insurance agent", "logistics coordinator", "site inspector"),
    "4": ("data entry clerk", "office assistant", "payroll clerk", "receptionist", "records clerk"),
    "5": ("sales associate", "cashier", "customer service agent", "waiter", "store keeper"),
    "6": ("farm supervisor", "crop grower", "livestock keeper", "fishery worker", "forestry worker"),
    "7": ("electrician", "carpenter", "machinist", "welder", "tailor"),
    "8": ("machine operator", "forklift driver", "assembly operator", "plant operator", "packer"),
    "9": ("cleaner", "porter", "warehouse laborer", "kitchen helper", "messenger"),
    "0": ("duty officer", "watch supervisor", "range instructor", "signals specialist", "quartermaster"),
}
_TITLE_QUALIFIERS = ("senior", "junior", "lead", "assistant", "regional", "night shift")
_DECORATORS_BY_KIND = {"activity": ("advanced", "general", "certified"), "tool": ("ms", "enterprise", "modern")}

DEFAULT_AUTOMATABLE_BIAS = 0.5


@dataclass(frozen=True)
class SynthConfig:
    seed: int
    n_jobs: int
    isco_mix: Mapping[str, float]
    canonical_activities: int = 60
    canonical_tools: int = 24
    synonym_variants_per_canonical: tuple[int, int] = (1, 3)
    automatable_bias: Mapping[str, float] = field(default_factory=dict)

    def validate(self) -> None:
        if self.n_jobs < 0 or self.canonical_activities < 0 or self.canonical_tools < 0:
            raise BadConfigError("counts must be >= 0")
        if abs(sum(self.isco_mix.values()) - 1.0) > 1e-9:
            raise BadConfigError("isco_mix proportions must sum to 1")
        for digit in self.isco_mix:
            if digit not in _TITLE_ROLES:
                raise BadConfigError(f"isco_mix key must be a single digit, got {digit!r}")
        lo, hi = self.synonym_variants_per_canonical
        if not (1 <= lo <= hi):
            raise BadConfigError("synonym_variants_per_canonical must satisfy 1 <= lo <= hi")
        if hi > len(VARIANT_STYLES):
            raise BadConfigError(f"at most {len(VARIANT_STYLES)} variants per canonical")
        for digit, p in self.automatable_bias.items():
            if not 0.0 <= p <= 1.0:
                raise BadConfigError(f"automatable_bias[{digit!r}] outside [0,1]")
        if self.canonical_activities > len(_ACTIVITY_HEADS) * len(_ACTIVITY_TAILS):
            raise BadConfigError("canonical_activities exceeds the name space")
        if self.canonical_tools > len(_TOOL_HEADS) * len(_TOOL_TAILS):
            raise BadConfigError("canonical_tools exceeds the name space")


@dataclass(frozen=True)
class SynthTruth:
    """Ground-truth sidecar for a synthetic corpus (never part of the corpus)."""

    activity_variants: Mapping[str, tuple[str, ...]]
    tool_variants: Mapping[str, tuple[str, ...]]

    def variant_to_canonical(self) -> dict[str, str]:
        out: dict[str, str] = {}
        for canonical, variants in (*self.activity_variants.items(), *self.tool_variants.items()):
            for v in variants:
                out[v] = canonical
        return out

    def labeled_pairs(
        self, n_positive: int, n_negative: int, seed: int
    ) -> list[tuple[str, str, bool]]:
        """Sample (form, form, same_concept) pairs for threshold-grid scoring."""
        rng = random.Random(seed)
        positives = [
            (variants[i], variants[j], True)
            for variants in self.activity_variants.values()
            for i in range(len(variants))
            for j in range(i + 1, len(variants))
        ]
        rng.shuffle(positives)
        canonicals = sorted(self.activity_variants)
        negatives: list[tuple[str, str, bool]] = []
        if len(canonicals) >= 2:
            while len(negatives) < n_negative:
                a, b = rng.sample(canonicals, 2)
                negatives.append(
                    (rng.choice(self.activity_variants[a]), rng.choice(self.activity_variants[b]), False)
                )
        return positives[:n_positive] + negatives


def _canonical_names(heads: Sequence[str], tails: Sequence[str], count: int) -> list[str]:
    names = [f"{h} {t}" for t in tails for h in heads]
    return names[:count]


def _variant_map(
    rng: random.Random, canonicals: Iterable[str], kind: str, lo: int, hi: int
) -> dict[str, tuple[str, ...]]:
    decorators = _DECORATORS_BY_KIND[kind]
    out: dict[str, tuple[str, ...]] = {}
    for canonical in canonicals:
        n = rng.randint(lo, hi)
        styles = rng.sample(VARIANT_STYLES, n)
        variants: list[str] = []
        for style in styles:
            form = apply_variant(canonical, style, decorator=rng.choice(decorators))
            if form not in variants:
                variants.append(form)
        out[canonical] = tuple(variants)
    return out


def _weighted_digit(rng: random.Random, mix: Mapping[str, float]) -> str:
    r = rng.random()
    acc = 0.0
    digits = sorted(mix)
    for digit in digits:
        acc += mix[digit]
        if r < acc:
            return digit
    return digits[-1]


def _domain_pools(canonicals: Sequence[str], digits: Sequence[str]) -> tuple[dict[str, list[str]], list[str]]:
    # Every 5th canonical is a cross-domain bridge; the rest cycle through majors.
    home: dict[str, list[str]] = {d: [] for d in digits}
    bridge: list[str] = []
    for i, name in enumerate(canonicals):
        if i % 5 == 0:
            bridge.append(name)
        else:
            home[digits[i % len(digits)]].append(name)
    return home, bridge


def _sample_canonicals(
    rng: random.Random, k: int, home: list[str], bridge: list[str], everything: Sequence[str]
) -> list[str]:
    chosen: list[str] = []
    pool_weights = ((home, 0.7), (bridge, 0.9), (everything, 1.0))
    attempts = 0
    while len(chosen) < k and attempts < 20 * k:
        attempts += 1
        r = rng.random()
        for pool, cutoff in pool_weights:
            if r < cutoff and pool:
                candidate = pool[rng.randrange(len(pool))]
                if candidate not in chosen:
                    chosen.append(candidate)
                break
    return chosen


def _generate(cfg: SynthConfig) -> tuple[Corpus, SynthTruth]:
    cfg.validate()
    rng = random.Random(cfg.seed)
    lo, hi = cfg.synonym_variants_per_canonical

    activities = _canonical_names(_ACTIVITY_HEADS, _ACTIVITY_TAILS, cfg.canonical_activities)
    tools = _canonical_names(_TOOL_HEADS, _TOOL_TAILS, cfg.canonical_tools)
    truth = SynthTruth(
        activity_variants=_variant_map(rng, activities, "activity", lo, hi),
        tool_variants=_variant_map(rng, tools, "tool", lo, hi),
    )

    digits = sorted(cfg.isco_mix)
    act_home, act_bridge = _domain_pools(activities, digits)
    tool_home, tool_bridge = _domain_pools(tools, digits)

    postings: list[JobPosting] = []
    for i in range(cfg.n_jobs):
        digit = _weighted_digit(rng, cfg.isco_mix)
        isco4 = f"{digit}{rng.randint(1, 3)}{rng.randint(1, 2)}{rng.randint(1, 9)}"
        role = rng.choice(_TITLE_ROLES[digit])
        title = f"{rng.choice(_TITLE_QUALIFIERS)} {role}" if rng.random() < 0.6 else role
        bias = cfg.automatable_bias.get(digit, DEFAULT_AUTOMATABLE_BIAS)
        tasks = tuple(
            Task(
                description=f"{rng.choice(_TASK_VERBS)} {rng.choice(_TASK_OBJECTS)}",
                importance=rng.choice(tuple(Importance)),
                automatable=rng.random() < bias,
            )
            for _ in range(rng.randint(1, 10))
        )
        k_act = rng.randint(3, 10) if activities else 0
        k_tool = rng.randint(1, 4) if tools else 0
        job_acts = _sample_canonicals(rng, min(k_act, len(activities)), act_home[digit], act_bridge, activities)
        job_tools = _sample_canonicals(rng, min(k_tool, len(tools)), tool_home[digit], tool_bridge, tools)
        postings.append(
            JobPosting(
                id=f"S{i:05d}",
                title=title,
                employer=rng.choice(_EMPLOYERS),
                source="synthetic",
                isco4=isco4,
                tasks=tasks,
                activity_mentions=tuple(rng.choice(truth.activity_variants[a]) for a in job_acts),
                tool_mentions=tuple(rng.choice(truth.tool_variants[t]) for t in job_tools),
            )
        )
    corpus = Corpus(tuple(postings), provenance="synthetic", seed=cfg.seed)
    return corpus, truth


def generate_synthetic_corpus(cfg: SynthConfig) -> Corpus:
    """Deterministic synthetic corpus; equal seeds give byte-identical output."""
    return _generate(cfg)[0]


def generate_synthetic_truth(cfg: SynthConfig) -> SynthTruth:
    """Ground-truth variant map for the corpus the same config generates."""
    return _generate(cfg)[1]
