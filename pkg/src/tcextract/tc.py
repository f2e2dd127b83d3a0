"""Topical components: topic-word lists and example phrases from attention.

The extraction runs two clustering passes over the attended phrase
vectors. A coarse pass groups phrases into topics and yields per-topic
word lists; a second pass with sub-clustering yields categories of
specific example phrases. Words are restricted to the source-text
vocabulary and each word belongs to at most one topic, so the output
can drive rubric features without double counting.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .attention import AttentionDump, PhraseRecord, filter_by_threshold
from .clustering import k_medoids


@dataclass
class TCParams:
    """Extraction knobs; defaults suit mid-size corpora."""

    m_topic_words: int = 16
    m_example: int = 18
    n_example: int = 15
    k_topic: int = 25
    k_example: int = 5
    attn_threshold: float = 0.05

    def __post_init__(self) -> None:
        for name in ("m_topic_words", "m_example", "n_example", "k_topic", "k_example"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if not 0.0 <= self.attn_threshold < 1.0:
            raise ValueError("attn_threshold must lie in [0, 1)")

    def as_dict(self) -> dict:
        return {
            "m_topic_words": self.m_topic_words,
            "m_example": self.m_example,
            "n_example": self.n_example,
            "k_topic": self.k_topic,
            "k_example": self.k_example,
            "attn_threshold": self.attn_threshold,
        }


@dataclass
class TopicalComponents:
    """Extracted topics and example-phrase categories for one prompt.

    topics: per topic, (word, weight) pairs sorted by decreasing weight.
    example_categories: per category, a list of phrases, each phrase a
    list of words.
    """

    prompt_id: str
    topics: list[list[tuple[str, float]]]
    example_categories: list[list[list[str]]]
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for t, topic in enumerate(self.topics):
            if not topic:
                raise ValueError(f"topic {t} is empty")
            for word, _ in topic:
                if word in seen:
                    raise ValueError(f"word {word!r} appears in more than one topic")
                seen.add(word)
        for c, category in enumerate(self.example_categories):
            if not category:
                raise ValueError(f"example category {c} is empty")
            for phrase in category:
                if not phrase:
                    raise ValueError(f"example category {c} contains an empty phrase")

    def topic_words(self) -> list[list[str]]:
        return [[w for w, _ in topic] for topic in self.topics]

    def all_topic_words(self) -> set[str]:
        return {w for topic in self.topics for w, _ in topic}


def cluster_phrases(
    records: list[PhraseRecord],
    m: int,
    n: int | None = None,
    metric: str = "cosine",
    seed: int = 0,
) -> list[list[list[PhraseRecord]]]:
    """Group phrase records into m clusters, optionally n sub-clusters each.

    Returns a list of m clusters; each cluster is a list of sub-clusters
    of records. Without sub-clustering each cluster has exactly one
    sub-cluster holding all its records. Clusters are ordered by their
    medoid's position in the input.
    """
    if len(records) < m:
        raise ValueError(
            f"cannot form {m} clusters from {len(records)} phrase records; "
            "lower the cluster count or the attention threshold"
        )
    points = np.stack([r.phrase_vec for r in records])
    top = k_medoids(points, k=m, metric=metric, seed=seed)
    grouped = top.clusters()
    result: list[list[list[PhraseRecord]]] = []
    for medoid in sorted(grouped):
        member_idx = grouped[medoid]
        members = [records[i] for i in member_idx]
        if n is None or len(members) <= 1:
            result.append([members])
            continue
        sub_k = min(n, len(members))
        sub_points = np.stack([r.phrase_vec for r in members])
        sub = k_medoids(sub_points, k=sub_k, metric=metric, seed=seed)
        sub_grouped = sub.clusters()
        result.append(
            [[members[i] for i in sub_grouped[sm]] for sm in sorted(sub_grouped)]
        )
    return result


def _cluster_word_weights(
    clusters: list[list[list[PhraseRecord]]], vocabulary: set[str]
) -> list[Counter]:
    """Per cluster, count source-vocabulary words across member phrases."""
    counters: list[Counter] = []
    for cluster in clusters:
        counts: Counter = Counter()
        for sub in cluster:
            for rec in sub:
                for tok in rec.phrase_tokens:
                    if tok in vocabulary:
                        counts[tok] += 1
        counters.append(counts)
    return counters


def generate_topic_words(
    clusters: list[list[list[PhraseRecord]]],
    vocabulary: set[str],
    k_topic: int,
) -> list[list[tuple[str, float]]]:
    """Pick up to k_topic words per cluster, each word owned by one cluster.

    A word seen in several clusters goes to the cluster where its
    normalized frequency (count over cluster token total) is strictly
    highest; ties go to the earliest cluster. Within a cluster, words
    rank by raw count, descending, then alphabetically. Clusters whose
    word lists come out empty are dropped.
    """
    counters = _cluster_word_weights(clusters, vocabulary)
    totals = [max(sum(c.values()), 1) for c in counters]
    words = sorted({w for c in counters for w in c})
    owner: dict[str, int] = {}
    for word in words:
        best_cluster = -1
        best_share = -1.0
        for ci, counts in enumerate(counters):
            if word not in counts:
                continue
            share = counts[word] / totals[ci]
            if share > best_share:
                best_share = share
                best_cluster = ci
        owner[word] = best_cluster
    topics: list[list[tuple[str, float]]] = []
    for ci, counts in enumerate(counters):
        owned = [(w, c) for w, c in counts.items() if owner[w] == ci]
        owned.sort(key=lambda wc: (-wc[1], wc[0]))
        top = [(w, float(c)) for w, c in owned[:k_topic]]
        if top:
            topics.append(top)
    return topics


def generate_example_phrases(
    clusters: list[list[list[PhraseRecord]]],
    vocabulary: set[str],
    k_example: int,
) -> list[list[list[str]]]:
    """Build one phrase per sub-cluster from its most frequent words.

    Each sub-cluster contributes the up-to-k_example source-vocabulary
    words that occur most often in its phrases (count descending, then
    alphabetical). Sub-clusters with no in-vocabulary words are dropped;
    categories left with no phrases are dropped.
    """
    categories: list[list[list[str]]] = []
    for cluster in clusters:
        phrases: list[list[str]] = []
        for sub in cluster:
            counts: Counter = Counter()
            for rec in sub:
                for tok in rec.phrase_tokens:
                    if tok in vocabulary:
                        counts[tok] += 1
            ranked = sorted(counts.items(), key=lambda wc: (-wc[1], wc[0]))
            phrase = [w for w, _ in ranked[:k_example]]
            if phrase:
                phrases.append(phrase)
        if phrases:
            categories.append(phrases)
    return categories


def extract_tc(
    dump: AttentionDump,
    vocabulary,
    params: TCParams | None = None,
    seed: int = 0,
) -> TopicalComponents:
    """Full extraction: threshold, cluster twice, emit topics and examples.

    vocabulary may be a SourceText (its vocabulary is used) or a plain
    set of words.
    """
    params = params or TCParams()
    if hasattr(vocabulary, "vocabulary"):
        vocabulary = vocabulary.vocabulary
    kept = filter_by_threshold(dump, params.attn_threshold)
    if not kept.records:
        raise ValueError(
            f"no records with sentence attention above {params.attn_threshold}; "
            "lower attn_threshold"
        )
    topic_clusters = cluster_phrases(
        kept.records, m=params.m_topic_words, n=None, seed=seed
    )
    example_clusters = cluster_phrases(
        kept.records, m=params.m_example, n=params.n_example, seed=seed
    )
    topics = generate_topic_words(topic_clusters, vocabulary, params.k_topic)
    categories = generate_example_phrases(example_clusters, vocabulary, params.k_example)
    return TopicalComponents(
        prompt_id=dump.prompt_id,
        topics=topics,
        example_categories=categories,
        params=params.as_dict(),
    )


def save_tc(tc: TopicalComponents, path: str | Path) -> None:
    path = Path(path)
    payload = {
        "prompt_id": tc.prompt_id,
        "params": tc.params,
        "topics": [[w for w, _ in topic] for topic in tc.topics],
        "categories": tc.example_categories,
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_tc(path: str | Path) -> TopicalComponents:
    """Read the JSON written by save_tc; word weights are not stored."""
    path = Path(path)
    obj = json.loads(path.read_text(encoding="utf-8"))
    for key in ("prompt_id", "topics", "categories"):
        if key not in obj:
            raise ValueError(f"{path.name}: missing key {key!r}")
    topics = [[(str(w), 0.0) for w in topic] for topic in obj["topics"]]
    categories = [
        [[str(w) for w in phrase] for phrase in category]
        for category in obj["categories"]
    ]
    return TopicalComponents(
        prompt_id=str(obj["prompt_id"]),
        topics=topics,
        example_categories=categories,
        params=dict(obj.get("params", {})),
    )
