import numpy as np
import pytest

from tcextract.corpus import Corpus, Essay
from tcextract.embeddings import (
    EmbeddingTable,
    cosine_similarity,
    load_embeddings,
    save_embeddings,
    train_embeddings,
)


def _corpus(texts: list[str]) -> Corpus:
    essays = [Essay.from_raw(f"e{i}", t, 2) for i, t in enumerate(texts)]
    return Corpus(prompt_id="p", essays=essays)


def test_every_word_gets_a_vector():
    corpus = _corpus(["water is connected to the hospital.", "bed nets are used."])
    table = train_embeddings(corpus, dim=3, window=2)
    assert set(table.vectors) == corpus.vocabulary()
    for vec in table.vectors.values():
        assert vec.shape == (3,)
        assert np.all(np.isfinite(vec))


def test_self_cosine_is_one():
    corpus = _corpus(["alpha beta gamma alpha beta.", "beta gamma delta."])
    table = train_embeddings(corpus, dim=2, window=2)
    for word, vec in table.vectors.items():
        if np.linalg.norm(vec) > 0:
            assert cosine_similarity(vec, vec) == pytest.approx(1.0)


def test_distributional_twins_have_cosine_one():
    # "blue" and "teal" occur in identical contexts, never together
    corpus = _corpus(
        [
            "the blue sky. the teal sky.",
            "a blue bird. a teal bird.",
            "blue water here. teal water here.",
        ]
    )
    table = train_embeddings(corpus, dim=4, window=2)
    sim = cosine_similarity(table.vectors["blue"], table.vectors["teal"])
    assert sim == pytest.approx(1.0, abs=1e-6)


def test_deterministic_across_runs():
    corpus = _corpus(["one two three four five.", "three four five six."])
    a = train_embeddings(corpus, dim=4, window=3, seed=1)
    b = train_embeddings(corpus, dim=4, window=3, seed=2)
    for word in a.vectors:
        assert np.array_equal(a.vectors[word], b.vectors[word])


def test_dim_above_vocab_errors():
    corpus = _corpus(["tiny corpus here."])
    with pytest.raises(ValueError, match="vocabulary"):
        train_embeddings(corpus, dim=10)


def test_window_respects_sentence_boundaries():
    # "left" and "right" are adjacent across a sentence break only, so
    # they must not co-occur; their vectors need not be related at all
    corpus = _corpus(["far left. right far."])
    table = train_embeddings(corpus, dim=2, window=5)
    assert set(table.vectors) == {"far", "left", "right"}


def test_save_load_round_trip(tmp_path):
    corpus = _corpus(["alpha beta gamma delta.", "beta gamma epsilon."])
    table = train_embeddings(corpus, dim=3, window=2)
    path = tmp_path / "emb.txt"
    save_embeddings(table, path)
    back = load_embeddings(path)
    assert back.dim == table.dim
    assert set(back.vectors) == set(table.vectors)
    for word in table.vectors:
        assert np.array_equal(back.vectors[word], table.vectors[word])


def test_load_small_file(tmp_path):
    path = tmp_path / "emb.txt"
    path.write_text("3 4\naa 1.0 2.0 3.0 4.0\nbb 0.5 0.5 0.5 0.5\ncc 0 0 0 1\n")
    table = load_embeddings(path)
    assert table.dim == 4
    assert len(table) == 3
    assert np.array_equal(table.vectors["cc"], np.array([0.0, 0.0, 0.0, 1.0]))


def test_load_rejects_short_row(tmp_path):
    path = tmp_path / "emb.txt"
    path.write_text("2 4\naa 1.0 2.0 3.0 4.0\nbb 1.0 2.0 3.0\n")
    with pytest.raises(ValueError, match="line 3"):
        load_embeddings(path)


def test_load_rejects_duplicate_word(tmp_path):
    path = tmp_path / "emb.txt"
    path.write_text("2 2\naa 1.0 2.0\naa 3.0 4.0\n")
    with pytest.raises(ValueError, match="duplicate"):
        load_embeddings(path)


def test_load_rejects_count_mismatch(tmp_path):
    path = tmp_path / "emb.txt"
    path.write_text("3 2\naa 1.0 2.0\nbb 3.0 4.0\n")
    with pytest.raises(ValueError, match="promised"):
        load_embeddings(path)


def test_table_rejects_wrong_length_vector():
    with pytest.raises(ValueError, match="shape"):
        EmbeddingTable(dim=3, vectors={"w": np.array([1.0, 2.0])})
