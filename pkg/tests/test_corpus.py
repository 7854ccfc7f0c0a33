import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jobgraph.corpus import (
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
    title_jaccard,
)
from jobgraph.errors import (
    BadConfigError,
    BadIscoError,
    DuplicateIdError,
    MalformedRecordError,
    MissingFieldError,
)
from jobgraph.risk import aggregate_by_isco, profile_corpus
from jobgraph.surface import normalize_surface

VALID_RECORD = {
    "id": "J1",
    "title": "data entry clerk",
    "employer": "acme",
    "source": "wuzzuf",
    "isco4": "4110",
    "tasks": [{"description": "enter data", "importance": "P", "automatable": True}],
    "activities": ["data entry"],
    "tools": ["excel"],
}


def write_corpus(tmp_path, records):
    path = tmp_path / "corpus.jsonl"
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")
    return path


def record(**overrides):
    rec = {k: (v.copy() if isinstance(v, list) else v) for k, v in VALID_RECORD.items()}
    rec.update(overrides)
    return rec


class TestLoadPostings:
    def test_two_valid_records(self, tmp_path):
        path = write_corpus(tmp_path, [record(), record(id="J2")])
        corpus = load_postings(path)
        assert len(corpus.postings) == 2
        assert corpus.provenance == "loaded"
        assert corpus.postings[0].tasks[0].automatable is True

    def test_missing_title(self, tmp_path):
        rec = record()
        del rec["title"]
        path = write_corpus(tmp_path, [rec])
        with pytest.raises(MissingFieldError) as exc:
            load_postings(path)
        assert exc.value.field == "title"
        assert exc.value.line_no == 1

    def test_duplicate_id(self, tmp_path):
        path = write_corpus(tmp_path, [record(), record(title="other")])
        with pytest.raises(DuplicateIdError) as exc:
            load_postings(path)
        assert exc.value.posting_id == "J1"

    def test_bad_isco(self, tmp_path):
        path = write_corpus(tmp_path, [record(isco4="41a0")])
        with pytest.raises(BadIscoError):
            load_postings(path)

    def test_task_count_bounds_rejected(self, tmp_path):
        too_many = [VALID_RECORD["tasks"][0]] * 16
        path = write_corpus(tmp_path, [record(tasks=too_many)])
        with pytest.raises(MalformedRecordError):
            load_postings(path)
        path = write_corpus(tmp_path, [record(id="J9", tasks=[])])
        with pytest.raises(MalformedRecordError):
            load_postings(path)

    def test_bad_importance_code(self, tmp_path):
        bad = [{"description": "x", "importance": "Primary", "automatable": False}]
        path = write_corpus(tmp_path, [record(tasks=bad)])
        with pytest.raises(MalformedRecordError):
            load_postings(path)

    def test_round_trip(self, tmp_path):
        cfg = SynthConfig(seed=5, n_jobs=30, isco_mix={"2": 0.5, "4": 0.5})
        corpus = generate_synthetic_corpus(cfg)
        out = tmp_path / "dump.jsonl"
        dump_postings(corpus, out)
        loaded = load_postings(out)
        assert loaded.postings == corpus.postings


ONE_TASK = (Task("enter data", Importance.PRIMARY, True),)


class TestDeduplicate:
    def job(self, id, title, employer="acme"):
        return JobPosting(
            id=id, title=title, employer=employer, source="wuzzuf", isco4="4110",
            tasks=ONE_TASK, activity_mentions=(), tool_mentions=(),
        )

    def test_token_set_duplicate_collapses(self):
        # identical token sets -> Jaccard 1.0 > 0.85
        c = Corpus((self.job("J1", "senior data entry clerk"), self.job("J2", "data entry clerk senior")))
        out = deduplicate(c, 0.85)
        assert [p.id for p in out.postings] == ["J1"]

    def test_exact_threshold_keeps_both(self):
        # intersection 17, union 20 -> Jaccard exactly 0.85, not strictly above
        shared = [f"w{i}" for i in range(17)]
        a = " ".join(shared + ["x1", "x2", "x3"])
        b = " ".join(shared)
        assert title_jaccard(a, b) == pytest.approx(0.85)
        c = Corpus((self.job("J1", a), self.job("J2", b)))
        assert len(deduplicate(c, 0.85).postings) == 2

    def test_different_employers_kept(self):
        c = Corpus((self.job("J1", "data entry clerk"), self.job("J2", "data entry clerk", employer="other")))
        assert len(deduplicate(c, 0.85).postings) == 2

    def test_idempotent_and_subset(self):
        rng = random.Random(7)
        words = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta"]
        jobs = tuple(
            self.job(f"J{i}", " ".join(rng.sample(words, rng.randint(2, 4))), employer=rng.choice(["a", "b"]))
            for i in range(40)
        )
        c = Corpus(jobs)
        once = deduplicate(c)
        twice = deduplicate(once)
        assert once == twice
        ids = {p.id for p in c.postings}
        assert all(p.id in ids for p in once.postings)

    def test_empty_corpus_passes_through(self):
        assert deduplicate(Corpus(())).postings == ()

    def test_bad_threshold(self):
        with pytest.raises(BadConfigError):
            deduplicate(Corpus(()), 1.5)


class TestSyntheticCorpus:
    MIX = {"1": 0.4, "4": 0.6}

    def test_seed_determinism(self):
        cfg = SynthConfig(seed=42, n_jobs=50, isco_mix=self.MIX)
        assert generate_synthetic_corpus(cfg) == generate_synthetic_corpus(cfg)

    def test_different_seeds_differ(self):
        a = generate_synthetic_corpus(SynthConfig(seed=1, n_jobs=50, isco_mix=self.MIX))
        b = generate_synthetic_corpus(SynthConfig(seed=2, n_jobs=50, isco_mix=self.MIX))
        assert a != b

    def test_zero_jobs(self):
        cfg = SynthConfig(seed=3, n_jobs=0, isco_mix=self.MIX)
        assert generate_synthetic_corpus(cfg).postings == ()

    def test_carries_seed(self):
        corpus = generate_synthetic_corpus(SynthConfig(seed=9, n_jobs=5, isco_mix=self.MIX))
        assert corpus.provenance == "synthetic"
        assert corpus.seed == 9

    def test_bad_config(self):
        with pytest.raises(BadConfigError):
            SynthConfig(seed=1, n_jobs=10, isco_mix={"1": 0.5, "4": 0.4}).validate()
        with pytest.raises(BadConfigError):
            SynthConfig(seed=1, n_jobs=-1, isco_mix=self.MIX).validate()
        with pytest.raises(BadConfigError):
            SynthConfig(seed=1, n_jobs=10, isco_mix=self.MIX, automatable_bias={"4": 1.2}).validate()
        with pytest.raises(BadConfigError):
            generate_synthetic_corpus(SynthConfig(seed=1, n_jobs=10, isco_mix=self.MIX, synonym_variants_per_canonical=(0, 2)))

    def test_mentions_are_variants_of_known_canonicals(self):
        cfg = SynthConfig(seed=11, n_jobs=40, isco_mix=self.MIX)
        corpus = generate_synthetic_corpus(cfg)
        truth = generate_synthetic_truth(cfg)
        v2c = truth.variant_to_canonical()
        for p in corpus.postings:
            for form in p.activity_mentions + p.tool_mentions:
                assert form in v2c
                assert normalize_surface(form) == v2c[form]

    def test_risk_gradient_follows_bias(self):
        # mirrors the major-group gradient: heavily automatable clerical vs managers
        cfg = SynthConfig(
            seed=42, n_jobs=1000, isco_mix={"4": 0.5, "1": 0.5},
            automatable_bias={"4": 0.7, "1": 0.2},
        )
        corpus = generate_synthetic_corpus(cfg)
        rows = aggregate_by_isco(profile_corpus(corpus), corpus, level=1)
        means = {r.group_code: r.mean_rho for r in rows}
        assert means["4"] > means["1"]

    def test_labeled_pairs_reference_known_variants(self):
        cfg = SynthConfig(seed=13, n_jobs=10, isco_mix=self.MIX)
        truth = generate_synthetic_truth(cfg)
        known = {v for vs in truth.activity_variants.values() for v in vs}
        pairs = truth.labeled_pairs(50, 50, seed=99)
        assert pairs, "expected a nonempty labeled set"
        for a, b, same in pairs:
            assert a in known and b in known
            canonical = truth.variant_to_canonical()
            assert (canonical[a] == canonical[b]) == same


@settings(max_examples=40)
@given(
    tokens_a=st.sets(st.sampled_from("abcdefgh"), min_size=1, max_size=6),
    tokens_b=st.sets(st.sampled_from("abcdefgh"), min_size=1, max_size=6),
)
def test_title_jaccard_symmetric_bounded(tokens_a, tokens_b):
    a, b = " ".join(tokens_a), " ".join(tokens_b)
    j = title_jaccard(a, b)
    assert 0.0 <= j <= 1.0
    assert j == title_jaccard(b, a)
    assert title_jaccard(a, a) == 1.0
