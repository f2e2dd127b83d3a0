"""Position-biased PageRank keyword extraction over a word graph.

Candidate words (alphabetic, non-stopword) become graph nodes; edges
count co-occurrences inside a sliding window. The PageRank restart
distribution is biased toward words that appear early: each occurrence
at 1-based document position p contributes 1/p to its word's bias mass.
Keyphrases are maximal runs of adjacent candidate words scored by the
sum of their member scores.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .corpus import SourceText
from .embeddings import EmbeddingTable

STOPWORDS = frozenset(
    """
    a about above after again against all am an and any are aren't as at be
    because been before being below between both but by can can't cannot could
    couldn't did didn't do does doesn't doing don't down during each few for
    from further had hadn't has hasn't have haven't having he he'd he'll he's
    her here here's hers herself him himself his how how's i i'd i'll i'm i've
    if in into is isn't it it's its itself let's me more most mustn't my myself
    no nor not of off on once only or other ought our ours ourselves out over
    own same shan't she she'd she'll she's should shouldn't so some such than
    that that's the their theirs them themselves then there there's these they
    they'd they'll they're they've this those through to too under until up
    very was wasn't we we'd we'll we're we've were weren't what what's when
    when's where where's which while who who's whom why why's will with won't
    would wouldn't you you'd you'll you're you've your yours yourself
    yourselves
    """.split()
)


@dataclass
class PrParams:
    window: int = 2
    damping: float = 0.85
    tol: float = 1e-6
    max_iter: int = 100
    pr_topic: int = 19
    max_phrase_len: int = 3

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError("window must be at least 1")
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie strictly between 0 and 1")
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.pr_topic < 1:
            raise ValueError("pr_topic must be at least 1")
        if self.max_phrase_len < 1:
            raise ValueError("max_phrase_len must be at least 1")


def is_candidate(token: str) -> bool:
    """Graph membership: purely alphabetic and not a stopword."""
    return token.isalpha() and token not in STOPWORDS


@dataclass
class WordGraph:
    """Undirected weighted co-occurrence graph with a position bias."""

    nodes: list[str]
    weights: np.ndarray
    position_bias: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.nodes)
        self.weights = np.asarray(self.weights, dtype=float)
        self.position_bias = np.asarray(self.position_bias, dtype=float)
        if self.weights.shape != (n, n):
            raise ValueError("weight matrix shape must match node count")
        if not np.allclose(self.weights, self.weights.T):
            raise ValueError("weight matrix must be symmetric")
        if self.position_bias.shape != (n,):
            raise ValueError("position bias length must match node count")
        if n and abs(self.position_bias.sum() - 1.0) > 1e-9:
            raise ValueError("position bias must sum to 1")


@dataclass
class RankedWords:
    """Words with scores, highest first; ties break alphabetically."""

    pairs: list[tuple[str, float]]
    converged: bool = True
    score_map: dict[str, float] = field(init=False)

    def __post_init__(self) -> None:
        self.score_map = dict(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def top(self, k: int) -> list[str]:
        return [w for w, _ in self.pairs[:k]]


def build_word_graph(source: SourceText, params: PrParams | None = None) -> WordGraph:
    """Construct the co-occurrence graph and position bias for a source.

    Positions are 1-based over the whole document and count every token,
    candidate or not. Co-occurrence windows never cross sentence
    boundaries. Each unordered pair occurrence adds 1 to the edge weight
    in both directions; self-loops are excluded.
    """
    params = params or PrParams()
    bias_mass: dict[str, float] = {}
    position = 0
    for sentence in source.sentences:
        for token in sentence:
            position += 1
            if is_candidate(token):
                bias_mass[token] = bias_mass.get(token, 0.0) + 1.0 / position
    nodes = sorted(bias_mass)
    index = {w: i for i, w in enumerate(nodes)}
    n = len(nodes)
    weights = np.zeros((n, n))
    for sentence in source.sentences:
        flags = [is_candidate(t) for t in sentence]
        for pos, token in enumerate(sentence):
            if not flags[pos]:
                continue
            hi = min(len(sentence), pos + params.window + 1)
            for other in range(pos + 1, hi):
                if not flags[other]:
                    continue
                a, b = index[token], index[sentence[other]]
                if a == b:
                    continue
                weights[a, b] += 1.0
                weights[b, a] += 1.0
    bias = np.array([bias_mass[w] for w in nodes])
    if n:
        bias = bias / bias.sum()
    return WordGraph(nodes=nodes, weights=weights, position_bias=bias)


def rank_graph(graph: WordGraph, params: PrParams | None = None):
    """Power-iterate the position-biased PageRank to a fixed point.

    Update: s <- (1-d) p + d (M s + dangling_mass p) where M is the
    column-normalized weight matrix and rows with no edges redistribute
    their mass through the bias p. Iteration starts from p and stops when
    the L1 change drops below tol. Returns (scores, converged).
    """
    params = params or PrParams()
    n = len(graph.nodes)
    if n == 0:
        return np.zeros(0), True
    p = graph.position_bias
    degree = graph.weights.sum(axis=0)
    connected = degree > 0.0
    m = np.zeros_like(graph.weights)
    if connected.any():
        m[:, connected] = graph.weights[:, connected] / degree[connected]
    s = p.copy()
    converged = False
    for _ in range(params.max_iter):
        dangling = s[~connected].sum()
        nxt = (1.0 - params.damping) * p + params.damping * (m @ s + dangling * p)
        if np.abs(nxt - s).sum() < params.tol:
            s = nxt
            converged = True
            break
        s = nxt
    return s, converged


def rank_words(source: SourceText, params: PrParams | None = None) -> RankedWords:
    """Rank every candidate word in the source by biased PageRank score."""
    params = params or PrParams()
    graph = build_word_graph(source, params)
    scores, converged = rank_graph(graph, params)
    pairs = sorted(
        zip(graph.nodes, (float(v) for v in scores)),
        key=lambda ws: (-ws[1], ws[0]),
    )
    if not converged:
        warnings.warn("PageRank did not converge within max_iter iterations")
    return RankedWords(pairs=pairs, converged=converged)


def extract_keyphrases(
    source: SourceText,
    ranked: RankedWords,
    params: PrParams | None = None,
) -> list[tuple[tuple[str, ...], float]]:
    """Assemble phrases from maximal runs of adjacent candidate words.

    Runs longer than max_phrase_len keep their first max_phrase_len
    words. A phrase's score is the sum of its member word scores.
    Duplicate phrases collapse to one entry; a phrase that appears as a
    contiguous subsequence of a higher-scoring phrase is removed. The
    result is sorted by score descending, ties alphabetically.
    """
    params = params or PrParams()
    phrases: dict[tuple[str, ...], float] = {}
    for sentence in source.sentences:
        run: list[str] = []
        for token in sentence + [""]:
            if token and is_candidate(token):
                run.append(token)
                continue
            if run:
                clipped = tuple(run[: params.max_phrase_len])
                score = sum(ranked.score_map.get(w, 0.0) for w in clipped)
                if clipped not in phrases:
                    phrases[clipped] = score
                run = []

    def contains(big: tuple[str, ...], small: tuple[str, ...]) -> bool:
        if len(small) >= len(big):
            return False
        return any(
            big[i : i + len(small)] == small
            for i in range(len(big) - len(small) + 1)
        )

    items = sorted(phrases.items(), key=lambda pv: (-pv[1], pv[0]))
    kept: list[tuple[tuple[str, ...], float]] = []
    for phrase, score in items:
        if any(
            contains(other, phrase) and other_score > score
            for other, other_score in items
        ):
            continue
        kept.append((phrase, score))
    return kept


def build_tc_pr(
    source: SourceText,
    emb: EmbeddingTable,
    params: PrParams | None = None,
    seed: int = 0,
):
    """Turn ranked keywords and keyphrases into topical components.

    Keywords with no embedding (or a zero vector, which cosine distance
    cannot handle) are dropped with a warning. The survivors are
    clustered into pr_topic groups by cosine k-medoids; each group is a
    topic whose words carry their PageRank scores, topics ordered by
    their best score. All keyphrases land in a single example category.
    """
    from .clustering import k_medoids
    from .tc import TopicalComponents

    params = params or PrParams()
    ranked = rank_words(source, params)
    if not len(ranked):
        raise ValueError("source has no candidate words to rank")
    usable: list[tuple[str, float]] = []
    dropped: list[str] = []
    for word, score in ranked:
        vec = emb.get(word)
        if vec is None or not np.linalg.norm(vec):
            dropped.append(word)
        else:
            usable.append((word, score))
    if dropped:
        warnings.warn(
            f"dropping {len(dropped)} keywords without usable embeddings "
            f"(first few: {dropped[:5]})"
        )
    if params.pr_topic > len(usable):
        raise ValueError(
            f"pr_topic={params.pr_topic} exceeds the {len(usable)} keywords "
            "with usable embeddings"
        )
    points = np.stack([emb.get(w) for w, _ in usable])
    solution = k_medoids(points, k=params.pr_topic, metric="cosine", seed=seed)
    grouped = solution.clusters()
    topics: list[list[tuple[str, float]]] = []
    for medoid in sorted(grouped):
        members = grouped[medoid]
        topic = sorted(
            ((usable[i][0], usable[i][1]) for i in members),
            key=lambda ws: (-ws[1], ws[0]),
        )
        topics.append(topic)
    topics.sort(key=lambda topic: (-topic[0][1], topic[0][0]))
    phrases = [
        list(phrase) for phrase, _ in extract_keyphrases(source, ranked, params)
    ]
    categories = [phrases] if phrases else []
    return TopicalComponents(
        prompt_id=source.prompt_id,
        topics=topics,
        example_categories=categories,
        params={
            "window": params.window,
            "damping": params.damping,
            "tol": params.tol,
            "max_iter": params.max_iter,
            "pr_topic": params.pr_topic,
            "max_phrase_len": params.max_phrase_len,
        },
    )
