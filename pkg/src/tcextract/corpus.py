"""Source texts, scored essay corpora, and the stratified train/dev/test split.

Everything downstream reads the types defined here. The tokenizer is
deliberately simple and fully deterministic: sentences break on terminal
punctuation and newlines, tokens are maximal runs of letters, digits, and
apostrophes, lowercased. All operations are pure; corpora are never mutated
after construction.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path

_SENTENCE_BREAK = re.compile(r"[.!?\n]")
_TOKEN = re.compile(r"[a-z0-9'’]+")

MIN_SCORE = 1
MAX_SCORE = 4


def tokenize(raw: str) -> list[list[str]]:
    """Split raw text into sentences of lowercase tokens.

    Sentences are split on '.', '!', '?', and newline. Tokens are maximal
    runs of ASCII letters, digits, and apostrophes (both ' and the
    typographic ’ count). Empty sentences are dropped; empty input
    yields an empty list.
    """
    sentences = []
    for chunk in _SENTENCE_BREAK.split(raw.lower()):
        tokens = _TOKEN.findall(chunk)
        if tokens:
            sentences.append(tokens)
    return sentences


@dataclass
class SourceText:
    """A source article: tokenized sentences plus its word vocabulary."""

    prompt_id: str
    raw: str
    sentences: list[list[str]]
    vocabulary: set[str] = field(default_factory=set)

    def __post_init__(self) -> None:
        expected = {tok for sent in self.sentences for tok in sent}
        if not self.vocabulary:
            self.vocabulary = expected
        elif self.vocabulary != expected:
            raise ValueError("vocabulary does not match sentence tokens")

    @classmethod
    def from_raw(cls, prompt_id: str, raw: str) -> "SourceText":
        return cls(prompt_id=prompt_id, raw=raw, sentences=tokenize(raw))

    def tokens(self) -> list[str]:
        return [tok for sent in self.sentences for tok in sent]


@dataclass
class Essay:
    """One student essay with its 1-4 evidence score."""

    essay_id: str
    raw: str
    sentences: list[list[str]]
    score: int

    def __post_init__(self) -> None:
        if not isinstance(self.score, int) or isinstance(self.score, bool):
            raise ValueError(f"essay {self.essay_id}: score must be an integer")
        if not MIN_SCORE <= self.score <= MAX_SCORE:
            raise ValueError(
                f"essay {self.essay_id}: score {self.score} outside "
                f"[{MIN_SCORE},{MAX_SCORE}]"
            )

    @classmethod
    def from_raw(cls, essay_id: str, raw: str, score: int) -> "Essay":
        return cls(essay_id=essay_id, raw=raw, sentences=tokenize(raw), score=score)

    def tokens(self) -> list[str]:
        return [tok for sent in self.sentences for tok in sent]


@dataclass
class Corpus:
    prompt_id: str
    essays: list[Essay]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for essay in self.essays:
            if essay.essay_id in seen:
                raise ValueError(f"duplicate essay id {essay.essay_id!r}")
            seen.add(essay.essay_id)

    def __len__(self) -> int:
        return len(self.essays)

    def essay_ids(self) -> list[str]:
        return [e.essay_id for e in self.essays]

    def scores(self) -> list[int]:
        return [e.score for e in self.essays]

    def vocabulary(self) -> set[str]:
        return {tok for e in self.essays for tok in e.tokens()}

    def score_counts(self) -> dict[int, int]:
        counts = {s: 0 for s in range(MIN_SCORE, MAX_SCORE + 1)}
        for e in self.essays:
            counts[e.score] += 1
        return counts


@dataclass
class CorpusSplit:
    """40/20/40 stratified partition of a corpus."""

    train: Corpus
    dev: Corpus
    test: Corpus


def load_source(path: str | Path, prompt_id: str | None = None) -> SourceText:
    """Read a plain UTF-8 source text file."""
    path = Path(path)
    raw = path.read_text(encoding="utf-8")
    return SourceText.from_raw(prompt_id or path.stem, raw)


def load_corpus(path: str | Path, fmt: str = "jsonl") -> Corpus:
    """Load a scored essay corpus from a JSON-lines file.

    Each line must be an object with "id", "text", and "score". Input order
    is preserved. Malformed lines, out-of-range scores, and duplicate ids
    raise ValueError naming the offending line.
    """
    if fmt != "jsonl":
        raise ValueError(f"unsupported corpus format {fmt!r}")
    path = Path(path)
    essays: list[Essay] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path.name} line {lineno}: invalid JSON ({exc})")
            if not isinstance(obj, dict) or not {"id", "text", "score"} <= obj.keys():
                raise ValueError(
                    f"{path.name} line {lineno}: expected object with id, text, score"
                )
            essay_id = str(obj["id"])
            score = obj["score"]
            if not isinstance(score, int) or isinstance(score, bool):
                raise ValueError(f"{path.name} line {lineno}: score must be an integer")
            if not MIN_SCORE <= score <= MAX_SCORE:
                raise ValueError(
                    f"{path.name} line {lineno}: score {score} outside "
                    f"[{MIN_SCORE},{MAX_SCORE}]"
                )
            if essay_id in seen:
                raise ValueError(f"{path.name} line {lineno}: duplicate id {essay_id!r}")
            seen.add(essay_id)
            essays.append(Essay.from_raw(essay_id, str(obj["text"]), score))
    return Corpus(prompt_id=path.stem, essays=essays)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for essay in corpus.essays:
            fh.write(
                json.dumps(
                    {"id": essay.essay_id, "text": essay.raw, "score": essay.score},
                    sort_keys=True,
                )
                + "\n"
            )


def _split_sizes(n: int) -> tuple[int, int, int]:
    # train = nearest(0.4 n), dev = nearest(0.2 n), test = remainder.
    # 2n/5 and n/5 never land on .5, so "nearest" is unambiguous.
    train = (4 * n + 5) // 10
    dev = (2 * n + 5) // 10
    return train, dev, n - train - dev


def stratified_split(corpus: Corpus, seed: int) -> CorpusSplit:
    """Partition a corpus 40/20/40 per score stratum, deterministically.

    Within each stratum train gets nearest(0.4 n), dev nearest(0.2 n), test
    the remainder. Strata with fewer than 3 essays go entirely to train with
    a warning. Each split preserves the original corpus order.
    """
    if not corpus.essays:
        raise ValueError("cannot split an empty corpus")
    import random

    rng = random.Random(seed)
    strata: dict[int, list[int]] = {s: [] for s in range(MIN_SCORE, MAX_SCORE + 1)}
    for idx, essay in enumerate(corpus.essays):
        strata[essay.score].append(idx)

    train_idx: set[int] = set()
    dev_idx: set[int] = set()
    test_idx: set[int] = set()
    for score in range(MIN_SCORE, MAX_SCORE + 1):
        members = strata[score]
        if not members:
            continue
        if len(members) < 3:
            warnings.warn(
                f"score-{score} stratum has only {len(members)} essays; "
                "assigning them to train"
            )
            train_idx.update(members)
            continue
        shuffled = list(members)
        rng.shuffle(shuffled)
        n_train, n_dev, _ = _split_sizes(len(shuffled))
        train_idx.update(shuffled[:n_train])
        dev_idx.update(shuffled[n_train : n_train + n_dev])
        test_idx.update(shuffled[n_train + n_dev :])

    def subset(indices: set[int]) -> Corpus:
        picked = [corpus.essays[i] for i in sorted(indices)]
        return Corpus(prompt_id=corpus.prompt_id, essays=picked)

    return CorpusSplit(train=subset(train_idx), dev=subset(dev_idx), test=subset(test_idx))
