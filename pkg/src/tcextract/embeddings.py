"""Count-based word embeddings: PPMI co-occurrence factorized by SVD.

Co-occurrence counts come from a symmetric window inside each sentence,
never across sentence boundaries. The count matrix is reweighted to
positive pointwise mutual information and factorized; word vectors are
the left singular vectors scaled by the square root of their singular
values. A fixed sign convention keeps results reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus


@dataclass
class EmbeddingTable:
    """Word-to-vector map with a single shared dimension."""

    dim: int
    vectors: dict[str, np.ndarray]

    def __post_init__(self) -> None:
        if self.dim <= 0:
            raise ValueError("embedding dimension must be positive")
        for word, vec in self.vectors.items():
            vec = np.asarray(vec, dtype=float)
            if vec.shape != (self.dim,):
                raise ValueError(
                    f"vector for {word!r} has shape {vec.shape}, expected ({self.dim},)"
                )
            self.vectors[word] = vec

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def get(self, word: str):
        return self.vectors.get(word)


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of the angle between two vectors; zero vectors give 0."""
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def _cooccurrence(corpus: Corpus, vocab: list[str], window: int) -> np.ndarray:
    index = {w: i for i, w in enumerate(vocab)}
    counts = np.zeros((len(vocab), len(vocab)))
    for essay in corpus.essays:
        for sentence in essay.sentences:
            ids = [index[tok] for tok in sentence]
            for pos, wi in enumerate(ids):
                hi = min(len(ids), pos + window + 1)
                for other in range(pos + 1, hi):
                    wj = ids[other]
                    counts[wi, wj] += 1.0
                    counts[wj, wi] += 1.0
    return counts


def _ppmi(counts: np.ndarray) -> np.ndarray:
    total = counts.sum()
    if total == 0.0:
        return np.zeros_like(counts)
    row = counts.sum(axis=1)
    # pmi = log( p(i,j) / (p(i) p(j)) ), kept only where positive
    with np.errstate(divide="ignore", invalid="ignore"):
        pmi = np.log(counts * total / np.outer(row, row))
    pmi[~np.isfinite(pmi)] = 0.0
    return np.maximum(pmi, 0.0)


def train_embeddings(
    corpus: Corpus, dim: int = 50, window: int = 5, seed: int = 0
) -> EmbeddingTable:
    """Learn embeddings for every word in the corpus vocabulary.

    The vocabulary is sorted, so identical corpora always produce
    identical tables. Requesting more dimensions than vocabulary words
    is an error. The seed is accepted for interface stability; the
    deterministic factorization does not consume randomness.
    """
    del seed
    vocab = sorted(corpus.vocabulary())
    if not vocab:
        raise ValueError("corpus has no vocabulary to embed")
    if dim > len(vocab):
        raise ValueError(
            f"embedding dim {dim} exceeds vocabulary size {len(vocab)}"
        )
    counts = _cooccurrence(corpus, vocab, window)
    ppmi = _ppmi(counts)
    u, s, _ = np.linalg.svd(ppmi, full_matrices=False)
    u = u[:, :dim]
    s = s[:dim]
    # sign convention: first component of each singular vector with
    # magnitude above 1e-12 is made positive
    for col in range(u.shape[1]):
        nonzero = np.nonzero(np.abs(u[:, col]) > 1e-12)[0]
        if nonzero.size and u[nonzero[0], col] < 0.0:
            u[:, col] = -u[:, col]
    mat = u * np.sqrt(s)
    return EmbeddingTable(dim=dim, vectors={w: mat[i].copy() for i, w in enumerate(vocab)})


def save_embeddings(table: EmbeddingTable, path: str | Path) -> None:
    """Write 'V D' header then one 'word v1 .. vD' line per word.

    Values are written with repr precision so loading reproduces the
    exact same floats.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"{len(table.vectors)} {table.dim}\n")
        for word in sorted(table.vectors):
            parts = " ".join(repr(v) for v in table.vectors[word].tolist())
            fh.write(f"{word} {parts}\n")


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Read the text format written by save_embeddings."""
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path.name} line 1: header must be 'V D'")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise ValueError(f"{path.name} line 1: header must be two integers")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(" ")
            if len(parts) != dim + 1:
                raise ValueError(
                    f"{path.name} line {lineno}: expected word plus {dim} values, "
                    f"got {len(parts) - 1}"
                )
            word = parts[0]
            if word in vectors:
                raise ValueError(f"{path.name} line {lineno}: duplicate word {word!r}")
            try:
                vectors[word] = np.array([float(p) for p in parts[1:]])
            except ValueError:
                raise ValueError(f"{path.name} line {lineno}: non-numeric value")
    if len(vectors) != count:
        raise ValueError(
            f"{path.name}: header promised {count} words, file contains {len(vectors)}"
        )
    return EmbeddingTable(dim=dim, vectors=vectors)
