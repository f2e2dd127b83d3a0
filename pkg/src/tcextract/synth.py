"""Synthetic corpus generator with known ground-truth topical components.

Real scored essay corpora are private, so acceptance tests run on
generated ones. The generator plants disjoint topic-word sets and
example phrases in a source text, writes essays whose planted-evidence
count scales with their score, and emits an attention dump whose phrase
vectors form well-separated per-topic Gaussian clusters. Everything is
a pure function of the spec, including its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .attention import AttentionDump, PhraseRecord
from .corpus import Corpus, Essay, SourceText
from .tc import TopicalComponents

_TOPIC_CENTER_DIST = 10.0  # unit-variance clusters, so 10 sigma apart


@dataclass
class SynthSpec:
    n_topics: int = 4
    words_per_topic: int = 6
    n_essays: int = 200
    score_mix: tuple = (0.29, 0.40, 0.21, 0.10)
    evidence_rate: tuple = (1.0, 3.0, 6.0, 9.0)
    noise_vocab: int = 30
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_topics < 1:
            raise ValueError("n_topics must be at least 1")
        if self.words_per_topic < 1:
            raise ValueError("words_per_topic must be at least 1")
        if self.n_essays < 1:
            raise ValueError("n_essays must be at least 1")
        if len(self.score_mix) != 4 or any(p < 0 for p in self.score_mix):
            raise ValueError("score_mix must be 4 nonnegative proportions")
        if abs(sum(self.score_mix) - 1.0) > 1e-9:
            raise ValueError("score_mix must sum to 1")
        if len(self.evidence_rate) != 4:
            raise ValueError("evidence_rate must have 4 entries")
        if any(b < a for a, b in zip(self.evidence_rate, self.evidence_rate[1:])):
            raise ValueError("evidence_rate must be nondecreasing over scores")
        if self.noise_vocab < 1:
            raise ValueError("noise_vocab must be at least 1")


class SynthResult(NamedTuple):
    source: SourceText
    corpus: Corpus
    dump: AttentionDump
    true_tc: TopicalComponents


def _letters(value: int, width: int) -> str:
    out = []
    for _ in range(width):
        out.append(chr(ord("a") + value % 26))
        value //= 26
    return "".join(reversed(out))


def _topic_words(spec: SynthSpec) -> list[list[str]]:
    return [
        [f"t{_letters(t, 2)}{_letters(i, 2)}" for i in range(spec.words_per_topic)]
        for t in range(spec.n_topics)
    ]


def _noise_words(spec: SynthSpec) -> list[str]:
    return [f"n{_letters(j, 3)}" for j in range(spec.noise_vocab)]


def _phrases(words: list[str]) -> list[list[str]]:
    """Split a topic's words into disjoint chunks of at most 3."""
    return [words[i : i + 3] for i in range(0, len(words), 3)]


def stratum_counts(n: int, mix) -> list[int]:
    """Largest-remainder apportionment of n essays over 4 scores."""
    exact = [p * n for p in mix]
    base = [math.floor(e) for e in exact]
    leftover = n - sum(base)
    remainders = sorted(
        range(4), key=lambda s: (-(exact[s] - base[s]), s)
    )
    for s in remainders[:leftover]:
        base[s] += 1
    return base


def generate(spec: SynthSpec, prompt_id: str = "synth") -> SynthResult:
    """Produce (source, corpus, dump, ground-truth TC) from the spec."""
    rng = np.random.default_rng(spec.seed)
    topics = _topic_words(spec)
    noise = _noise_words(spec)
    phrase_list: list[tuple[int, list[str]]] = []
    for t, words in enumerate(topics):
        for phrase in _phrases(words):
            phrase_list.append((t, phrase))

    source_sentences = []
    for t, words in enumerate(topics):
        source_sentences.append(" ".join(words))
        for _, phrase in ((tt, p) for tt, p in phrase_list if tt == t):
            source_sentences.append(" ".join(phrase))
    source_raw = ". ".join(source_sentences) + "."
    source = SourceText.from_raw(prompt_id, source_raw)

    counts = stratum_counts(spec.n_essays, spec.score_mix)
    scores = [s + 1 for s in range(4) for _ in range(counts[s])]
    rng.shuffle(scores)

    dim = max(8, spec.n_topics)
    centers = np.zeros((spec.n_topics, dim))
    for t in range(spec.n_topics):
        centers[t, t] = _TOPIC_CENTER_DIST

    width = max(4, len(str(spec.n_essays)))
    essays: list[Essay] = []
    records: list[PhraseRecord] = []
    for e_idx, score in enumerate(scores):
        essay_id = f"e{e_idx + 1:0{width}d}"
        n_planted = int(rng.poisson(spec.evidence_rate[score - 1]))
        sentences: list[tuple[list[str], int | None]] = []
        for _ in range(n_planted):
            t, phrase = phrase_list[int(rng.integers(0, len(phrase_list)))]
            sentences.append((list(phrase), t))
        for _ in range(int(rng.integers(3, 8))):
            length = int(rng.integers(4, 8))
            picks = rng.integers(0, len(noise), size=length)
            sentences.append(([noise[i] for i in picks], None))
        order = rng.permutation(len(sentences))
        sentences = [sentences[i] for i in order]

        raw = ". ".join(" ".join(toks) for toks, _ in sentences) + "."
        essays.append(Essay.from_raw(essay_id, raw, score))

        for sent_idx, (toks, topic) in enumerate(sentences):
            if topic is None:
                attn_sent = float(rng.uniform(0.001, 0.045))
                attn_phrase = float(rng.uniform(0.2, 0.8))
                vec = rng.normal(0.0, 1.0, size=dim)
                phrase_tokens = toks[:3]
            else:
                attn_sent = float(rng.uniform(0.55, 0.95))
                attn_phrase = float(rng.uniform(0.5, 1.0))
                vec = centers[topic] + rng.normal(0.0, 1.0, size=dim)
                phrase_tokens = list(toks)
            records.append(
                PhraseRecord(
                    essay_id=essay_id,
                    sentence_index=sent_idx,
                    attn_sent=attn_sent,
                    attn_phrase=attn_phrase,
                    phrase_tokens=phrase_tokens,
                    phrase_vec=vec,
                )
            )

    corpus = Corpus(prompt_id=prompt_id, essays=essays)
    dump = AttentionDump(prompt_id=prompt_id, dim=dim, records=records)
    true_tc = TopicalComponents(
        prompt_id=prompt_id,
        topics=[[(w, 1.0) for w in words] for words in topics],
        example_categories=[
            [list(p) for tt, p in phrase_list if tt == t] for t in range(spec.n_topics)
        ],
        params={"generator": "synth", "seed": spec.seed},
    )
    return SynthResult(source=source, corpus=corpus, dump=dump, true_tc=true_tc)
