import numpy as np
import pytest

from tcextract.corpus import Essay, tokenize
from tcextract.embeddings import EmbeddingTable
from tcextract.features import (
    MatchParams,
    RubricFeatures,
    extract_features,
    phrase_mentioned,
    read_features_csv,
    write_features_csv,
)
from tcextract.tc import TopicalComponents

NO_EMB = EmbeddingTable(dim=2, vectors={})

# A score-3 student essay about a village development project, used as a
# fixed reference point for exact-match feature values.
FIXTURE_ESSAY = (
    "In my opinion I think that they will achieve it in lifetime. During the "
    "years threw 2004 and 2008 they made progress. People didn’t have the "
    "money to buy the stuff in 2004. The hospital was packed with patients "
    "and they didn’t have alot of treatment in 2004. In 2008 it changed the "
    "hospital had medicine, free of charge, and for all the common dieases. "
    "Water was connected to the hospital and has a generator for "
    "electricity. Everybody has net in their site. The hunger crisis has "
    "been addressed with fertilizer and seeds, as well as the tools needed "
    "to maintain the food. The school has no fees and they serve lunch. To "
    "me that’s sounds like it is going achieve it in the lifetime."
)

# Curated four-topic reference word lists (medical care, bed nets,
# farming, schooling), de-duplicated so each word belongs to one topic.
FIXTURE_TOPICS = [
    ["care", "health", "hospital", "treatment", "doctor", "electricity",
     "disease", "water", "sick", "medicine", "generator", "die", "kid",
     "bed", "patient", "clinical", "officer", "running"],
    ["net", "malaria", "infect", "bednet", "mosquito", "bug", "sleeping",
     "cheap", "biting"],
    ["farmer", "fertilizer", "irrigation", "dying", "crop", "seed",
     "harvest", "hungry", "feed", "food"],
    ["school", "supplies", "fee", "student", "midday", "meal", "lunch",
     "supply", "book", "paper", "pencil", "energy", "free", "children",
     "go", "attend"],
]


def _fixture_tc() -> TopicalComponents:
    return TopicalComponents(
        prompt_id="village",
        topics=[[(w, 1.0) for w in words] for words in FIXTURE_TOPICS],
        example_categories=[
            [["hospital", "medicine", "free"], ["generator", "electricity"]],
            [["bed", "net", "site"]],
            [["fertilizer", "seeds", "tools"]],
            [["no", "school", "fees"], ["serve", "lunch"]],
        ],
    )


def test_phrase_mentioned_exact_three_of_three():
    sentence = tokenize("the school has no fees and they serve lunch")[0]
    assert phrase_mentioned(sentence, ["no", "school", "fees"], NO_EMB)


def test_phrase_mentioned_empty_sentence_false():
    assert not phrase_mentioned([], ["free", "lunch"], NO_EMB)


def test_phrase_mentioned_identical_sentence_true():
    phrase = ["bed", "nets", "used"]
    assert phrase_mentioned(list(phrase), phrase, NO_EMB)


def test_phrase_mentioned_coverage_threshold():
    sentence = ["water", "arrived"]
    phrase = ["water", "pump", "repair", "crew"]  # 1/4 < ceil(0.5*4)=2
    assert not phrase_mentioned(sentence, phrase, NO_EMB)
    assert phrase_mentioned(
        sentence + ["pump"], phrase, NO_EMB
    )  # 2/4 matches


def test_phrase_mentioned_semantic_match():
    emb = EmbeddingTable(
        dim=2,
        vectors={
            "lunch": np.array([1.0, 0.0]),
            "meal": np.array([0.99, 0.1]),
            "rocket": np.array([0.0, 1.0]),
        },
    )
    params = MatchParams(sim_threshold=0.9, phrase_coverage=1.0)
    assert phrase_mentioned(["meal", "served"], ["lunch"], emb, params)
    assert not phrase_mentioned(["rocket", "served"], ["lunch"], emb, params)


def test_phrase_mentioned_bag_semantics():
    sentence = tokenize("lunch serve they and fees no has school the")[0]
    assert phrase_mentioned(sentence, ["no", "school", "fees"], NO_EMB)


def test_phrase_mentioned_rejects_empty_phrase():
    with pytest.raises(ValueError):
        phrase_mentioned(["a"], [], NO_EMB)


def test_fixture_essay_hits_all_four_topics():
    essay = Essay.from_raw("e1", FIXTURE_ESSAY, 3)
    feats = extract_features(essay, _fixture_tc(), NO_EMB)
    assert feats.npe == 4
    assert feats.woc == len(essay.tokens())
    # evidence is spread over well more than 2 sentences
    assert feats.con == 0
    assert len(feats.spc) == 4
    assert all(v >= 1 for v in feats.spc)


def test_empty_essay_features():
    essay = Essay.from_raw("e1", "", 1)
    feats = extract_features(essay, _fixture_tc(), NO_EMB)
    assert feats.npe == 0
    assert feats.spc == [0, 0, 0, 0]
    assert feats.woc == 0
    assert feats.con == 1


def test_npe_and_spc_bounds():
    essay = Essay.from_raw("e1", FIXTURE_ESSAY, 3)
    tc = _fixture_tc()
    feats = extract_features(essay, tc, NO_EMB)
    assert 0 <= feats.npe <= len(tc.topics)
    for value, category in zip(feats.spc, tc.example_categories):
        assert 0 <= value <= len(category)


def test_con_flips_on_concentration():
    tc = _fixture_tc()
    concentrated = Essay.from_raw(
        "e1", "The hospital helped. Noise here. More noise there.", 2
    )
    assert extract_features(concentrated, tc, NO_EMB).con == 1
    spread = Essay.from_raw(
        "e2", "The hospital helped. A net arrived. The school opened.", 2
    )
    assert extract_features(spread, tc, NO_EMB).con == 0


def test_monotone_under_appended_sentence():
    rng = np.random.default_rng(9)
    tc = _fixture_tc()
    pool = [w for topic in FIXTURE_TOPICS for w in topic] + ["filler", "words"]
    base_sentences = tokenize(FIXTURE_ESSAY)
    for _ in range(50):
        cut = int(rng.integers(1, len(base_sentences) + 1))
        raw = ". ".join(" ".join(s) for s in base_sentences[:cut]) + "."
        extra = " ".join(
            pool[i] for i in rng.integers(0, len(pool), size=int(rng.integers(1, 6)))
        )
        before = extract_features(Essay.from_raw("e", raw, 2), tc, NO_EMB)
        after = extract_features(
            Essay.from_raw("e", raw + " " + extra + ".", 2), tc, NO_EMB
        )
        assert after.npe >= before.npe
        assert after.woc > before.woc
        assert all(a >= b for a, b in zip(after.spc, before.spc))


def test_features_require_topics():
    with pytest.raises(ValueError, match="topic"):
        extract_features(
            Essay.from_raw("e", "words.", 1),
            TopicalComponents(prompt_id="p", topics=[], example_categories=[]),
            NO_EMB,
        )


def test_feature_csv_round_trip(tmp_path):
    rows = [
        ("e1", RubricFeatures(npe=2, con=0, spc=[1, 0, 2], woc=40), 3),
        ("e2", RubricFeatures(npe=0, con=1, spc=[0, 0, 0], woc=12), 1),
    ]
    path = tmp_path / "features.csv"
    write_features_csv(rows, path)
    header = path.read_text().splitlines()[0]
    assert header == "essay_id,npe,con,spc_1,spc_2,spc_3,woc,score"
    back = read_features_csv(path)
    assert back == rows


def test_feature_csv_rejects_ragged_spc(tmp_path):
    rows = [
        ("e1", RubricFeatures(npe=1, con=0, spc=[1, 0], woc=10), 2),
        ("e2", RubricFeatures(npe=1, con=0, spc=[1], woc=10), 2),
    ]
    with pytest.raises(ValueError, match="spc length"):
        write_features_csv(rows, tmp_path / "bad.csv")
