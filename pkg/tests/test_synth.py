import numpy as np
import pytest

from tcextract.metrics import pearson_r
from tcextract.synth import SynthSpec, generate, stratum_counts


def test_spec_validation():
    with pytest.raises(ValueError, match="sum to 1"):
        SynthSpec(score_mix=(0.5, 0.5, 0.5, 0.5))
    with pytest.raises(ValueError, match="nondecreasing"):
        SynthSpec(evidence_rate=(5.0, 3.0, 6.0, 9.0))
    with pytest.raises(ValueError):
        SynthSpec(n_essays=0)


def test_stratum_counts_default_mix():
    assert stratum_counts(100, (0.29, 0.40, 0.21, 0.10)) == [29, 40, 21, 10]
    assert stratum_counts(200, (0.29, 0.40, 0.21, 0.10)) == [58, 80, 42, 20]


def test_stratum_counts_sum():
    rng = np.random.default_rng(1)
    for _ in range(20):
        raw = rng.uniform(0.05, 1.0, size=4)
        mix = tuple(raw / raw.sum())
        n = int(rng.integers(1, 500))
        counts = stratum_counts(n, mix)
        assert sum(counts) == n
        assert all(c >= 0 for c in counts)


def test_generated_corpus_matches_spec():
    spec = SynthSpec(n_essays=100, seed=3)
    result = generate(spec)
    assert len(result.corpus) == 100
    assert result.corpus.score_counts() == {1: 29, 2: 40, 3: 21, 4: 10}
    assert len(set(result.corpus.essay_ids())) == 100


def test_deterministic_given_seed():
    spec = SynthSpec(n_essays=30, seed=9)
    a = generate(spec)
    b = generate(spec)
    assert [e.raw for e in a.corpus.essays] == [e.raw for e in b.corpus.essays]
    assert a.source.raw == b.source.raw
    for ra, rb in zip(a.dump.records, b.dump.records):
        assert ra.essay_id == rb.essay_id
        assert ra.attn_sent == rb.attn_sent
        assert np.array_equal(ra.phrase_vec, rb.phrase_vec)
    different = generate(SynthSpec(n_essays=30, seed=10))
    assert [e.raw for e in a.corpus.essays] != [
        e.raw for e in different.corpus.essays
    ]


def test_true_tc_words_subset_of_source_vocabulary():
    result = generate(SynthSpec(n_essays=25, seed=4))
    vocab = result.source.vocabulary
    for topic in result.true_tc.topics:
        for word, _ in topic:
            assert word in vocab
    for category in result.true_tc.example_categories:
        for phrase in category:
            assert set(phrase) <= vocab


def test_planted_attention_dominates_noise():
    result = generate(SynthSpec(n_essays=50, seed=6))
    planted_words = {w for t in result.true_tc.topics for w, _ in t}
    planted, noise = [], []
    for rec in result.dump.records:
        if set(rec.phrase_tokens) <= planted_words:
            planted.append(rec.attn_sent)
        else:
            noise.append(rec.attn_sent)
    assert planted and noise
    assert min(planted) > max(noise)


def test_phrase_vectors_form_separated_clusters():
    spec = SynthSpec(n_topics=3, n_essays=60, seed=2)
    result = generate(spec)
    word_topic = {
        w: t for t, topic in enumerate(result.true_tc.topics) for w, _ in topic
    }
    by_topic: dict[int, list[np.ndarray]] = {}
    for rec in result.dump.records:
        t = word_topic.get(rec.phrase_tokens[0])
        if t is not None and set(rec.phrase_tokens) <= set(word_topic):
            by_topic.setdefault(t, []).append(rec.phrase_vec)
    centers = {t: np.mean(vs, axis=0) for t, vs in by_topic.items()}
    for t, vs in by_topic.items():
        spread = max(np.linalg.norm(v - centers[t]) for v in vs)
        for other, center in centers.items():
            if other != t:
                gap = np.linalg.norm(centers[t] - center)
                assert gap > spread  # clusters stay apart


def test_score_correlates_with_planted_count():
    result = generate(SynthSpec(n_essays=120, seed=8))
    planted_words = {w for t in result.true_tc.topics for w, _ in t}
    counts = []
    for essay in result.corpus.essays:
        n = sum(
            1 for s in essay.sentences if set(s) <= planted_words
        )
        counts.append(n)
    scores = result.corpus.scores()
    assert pearson_r(counts, scores) > 0.5


def test_dump_dim_floor():
    assert generate(SynthSpec(n_topics=2, n_essays=10, seed=0)).dump.dim == 8
    assert generate(SynthSpec(n_topics=12, words_per_topic=3, n_essays=10, seed=0)).dump.dim == 12
