"""Rubric features computed from an essay and its prompt's topical components.

Four features feed the score model: NPE counts topics with at least one
topic word present (exact match); SPC counts, per example category, the
distinct phrases semantically mentioned; CON flags essays whose evidence
is concentrated in fewer than three sentences; WOC is plain token count.
NPE is deliberately exact-match while SPC allows embedding-similar words,
so the two features measure different things.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .corpus import Essay
from .embeddings import EmbeddingTable, cosine_similarity
from .tc import TopicalComponents


@dataclass
class MatchParams:
    sim_threshold: float = 0.8
    phrase_coverage: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.sim_threshold <= 1.0:
            raise ValueError("sim_threshold must lie in [0, 1]")
        if not 0.0 < self.phrase_coverage <= 1.0:
            raise ValueError("phrase_coverage must lie in (0, 1]")


@dataclass
class RubricFeatures:
    npe: int
    con: int
    spc: list[int]
    woc: int

    def __post_init__(self) -> None:
        if self.npe < 0 or self.woc < 0:
            raise ValueError("npe and woc must be nonnegative")
        if self.con not in (0, 1):
            raise ValueError("con must be 0 or 1")
        if any(v < 0 for v in self.spc):
            raise ValueError("spc entries must be nonnegative")

    def as_vector(self) -> list[int]:
        return [self.npe, self.con, *self.spc, self.woc]


def _word_matches(word: str, sentence_words: set[str], emb: EmbeddingTable,
                  threshold: float) -> bool:
    if word in sentence_words:
        return True
    vec = emb.get(word)
    if vec is None:
        return False
    for other in sentence_words:
        ovec = emb.get(other)
        if ovec is not None and cosine_similarity(vec, ovec) >= threshold:
            return True
    return False


def phrase_mentioned(
    sentence: list[str],
    phrase: list[str],
    emb: EmbeddingTable,
    params: MatchParams | None = None,
) -> bool:
    """Decide whether a sentence mentions a phrase, order-insensitively.

    At least ceil(phrase_coverage * len(phrase)) phrase words must each
    match some sentence word, where matching means token equality or
    embedding cosine at or above sim_threshold. Phrase words missing
    from the embeddings fall back to exact matching.
    """
    if not phrase:
        raise ValueError("phrase must be non-empty")
    params = params or MatchParams()
    if not sentence:
        return False
    needed = math.ceil(params.phrase_coverage * len(phrase))
    sentence_words = set(sentence)
    matched = 0
    for word in phrase:
        if _word_matches(word, sentence_words, emb, params.sim_threshold):
            matched += 1
            if matched >= needed:
                return True
    return False


def extract_features(
    essay: Essay,
    tc: TopicalComponents,
    emb: EmbeddingTable,
    params: MatchParams | None = None,
) -> RubricFeatures:
    """Compute npe, con, spc, and woc for one essay."""
    if not tc.topics:
        raise ValueError("topical components must contain at least one topic")
    params = params or MatchParams()
    essay_words = set(essay.tokens())

    npe = sum(
        1
        for topic in tc.topics
        if any(word in essay_words for word, _ in topic)
    )

    all_topic_words = tc.all_topic_words()
    evidence_sentences = sum(
        1
        for sentence in essay.sentences
        if any(tok in all_topic_words for tok in sentence)
    )
    con = 1 if evidence_sentences < 3 else 0

    spc = []
    for category in tc.example_categories:
        mentioned = 0
        for phrase in category:
            if any(
                phrase_mentioned(sentence, phrase, emb, params)
                for sentence in essay.sentences
            ):
                mentioned += 1
        spc.append(mentioned)

    woc = len(essay.tokens())
    return RubricFeatures(npe=npe, con=con, spc=spc, woc=woc)


def write_features_csv(
    rows: list[tuple[str, RubricFeatures, int]], path: str | Path
) -> None:
    """Write essay_id, npe, con, spc_1..spc_T, woc, score rows."""
    path = Path(path)
    if not rows:
        raise ValueError("no feature rows to write")
    n_spc = len(rows[0][1].spc)
    header = ["essay_id", "npe", "con"] + [f"spc_{i + 1}" for i in range(n_spc)] + [
        "woc",
        "score",
    ]
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for essay_id, feats, score in rows:
            if len(feats.spc) != n_spc:
                raise ValueError(
                    f"essay {essay_id!r}: spc length {len(feats.spc)} does not "
                    f"match first row's {n_spc}"
                )
            writer.writerow([essay_id, feats.npe, feats.con, *feats.spc, feats.woc, score])


def read_features_csv(path: str | Path) -> list[tuple[str, RubricFeatures, int]]:
    path = Path(path)
    rows: list[tuple[str, RubricFeatures, int]] = []
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:3] != ["essay_id", "npe", "con"]:
            raise ValueError(f"{path.name}: malformed feature header")
        spc_cols = [h for h in header if h.startswith("spc_")]
        expected = ["essay_id", "npe", "con"] + spc_cols + ["woc", "score"]
        if header != expected:
            raise ValueError(f"{path.name}: malformed feature header")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValueError(f"{path.name} line {lineno}: wrong column count")
            try:
                values = [int(v) for v in row[1:]]
            except ValueError:
                raise ValueError(f"{path.name} line {lineno}: non-integer value")
            feats = RubricFeatures(
                npe=values[0],
                con=values[1],
                spc=values[2 : 2 + len(spc_cols)],
                woc=values[2 + len(spc_cols)],
            )
            rows.append((row[0], feats, values[-1]))
    return rows
