"""Bagged decision-tree classifier mapping rubric features to scores 1-4.

Each tree trains on a bootstrap resample and considers a random subset of
ceil(sqrt(F)) features at every split, chosen by Gini impurity. All
randomness flows from one master seed through per-tree child seeds, so
training is reproducible and order-independent once rows are put in
canonical essay-id order. Prediction is a majority vote with ties going
to the lower score.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import MAX_SCORE, MIN_SCORE
from .features import RubricFeatures

_FORMAT = "rubric-forest"
_VERSION = 1


@dataclass
class ForestConfig:
    n_trees: int = 500
    max_depth: int | None = None
    min_leaf: int = 1

    def __post_init__(self) -> None:
        if self.n_trees < 1:
            raise ValueError("n_trees must be at least 1")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be at least 1 when set")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be at least 1")


@dataclass
class EnsembleModel:
    """Trained ensemble: trees are nested dicts, JSON-serializable as is."""

    trees: list[dict]
    n_features: int
    config: ForestConfig
    seed: int

    def __post_init__(self) -> None:
        if not self.trees:
            raise ValueError("model must contain at least one tree")
        if self.n_features < 1:
            raise ValueError("n_features must be at least 1")


def _leaf(labels: np.ndarray) -> dict:
    counts = np.bincount(labels, minlength=MAX_SCORE + 1)[MIN_SCORE:]
    # argmax returns the first maximum, which is the lower score
    return {"leaf": int(np.argmax(counts)) + MIN_SCORE}


def _best_split(
    x: np.ndarray, labels: np.ndarray, feature_ids: np.ndarray, min_leaf: int
):
    """Lowest weighted-Gini split over the given features, or None.

    Ties break toward the lower feature index, then the lower threshold.
    """
    n = labels.shape[0]
    onehot = np.zeros((n, MAX_SCORE - MIN_SCORE + 1))
    onehot[np.arange(n), labels - MIN_SCORE] = 1.0
    best = None  # (impurity, feature, threshold)
    for f in feature_ids:
        vals = x[:, f]
        order = np.argsort(vals, kind="stable")
        sv = vals[order]
        cum = np.cumsum(onehot[order], axis=0)
        total = cum[-1]
        sizes_left = np.arange(1, n)
        sizes_right = n - sizes_left
        valid = (sv[:-1] != sv[1:]) & (sizes_left >= min_leaf) & (sizes_right >= min_leaf)
        if not valid.any():
            continue
        left = cum[:-1]
        right = total - left
        # n_side * gini_side = n_side - sum(counts^2) / n_side
        gini_l = sizes_left - (left**2).sum(axis=1) / sizes_left
        gini_r = sizes_right - (right**2).sum(axis=1) / sizes_right
        impurity = (gini_l + gini_r) / n
        impurity[~valid] = np.inf
        idx = int(np.argmin(impurity))
        thr = float((sv[idx] + sv[idx + 1]) / 2.0)
        cand = (float(impurity[idx]), int(f), thr)
        if best is None or cand < best:
            best = cand
    return best


def _grow(
    x: np.ndarray,
    labels: np.ndarray,
    rng: np.random.Generator,
    config: ForestConfig,
    depth: int,
) -> dict:
    if (
        labels.shape[0] < 2 * config.min_leaf
        or np.all(labels == labels[0])
        or (config.max_depth is not None and depth >= config.max_depth)
    ):
        return _leaf(labels)
    n_features = x.shape[1]
    k = math.ceil(math.sqrt(n_features))
    subset = np.sort(rng.choice(n_features, size=k, replace=False))
    split = _best_split(x, labels, subset, config.min_leaf)
    if split is None and k < n_features:
        # the sampled features were constant here; fall back to all of
        # them so a separable node is never forced into an impure leaf
        split = _best_split(x, labels, np.arange(n_features), config.min_leaf)
    if split is None:
        return _leaf(labels)
    _, feature, threshold = split
    mask = x[:, feature] <= threshold
    return {
        "feature": feature,
        "threshold": threshold,
        "left": _grow(x[mask], labels[mask], rng, config, depth + 1),
        "right": _grow(x[~mask], labels[~mask], rng, config, depth + 1),
    }


def train_model(
    features: list[RubricFeatures],
    scores: list[int],
    config: ForestConfig | None = None,
    seed: int = 0,
    essay_ids: list[str] | None = None,
) -> EnsembleModel:
    """Fit the bagged ensemble.

    When essay_ids are supplied, rows are first sorted by id so that the
    result does not depend on input order. Each tree gets its own child
    seed spawned from the master seed.
    """
    config = config or ForestConfig()
    if not features:
        raise ValueError("cannot train on an empty feature list")
    if len(features) != len(scores):
        raise ValueError(
            f"{len(features)} feature rows but {len(scores)} scores"
        )
    if len(features) < 2:
        raise ValueError("need at least 2 training rows")
    for s in scores:
        if not MIN_SCORE <= s <= MAX_SCORE:
            raise ValueError(f"score {s} outside [{MIN_SCORE},{MAX_SCORE}]")
    vectors = [f.as_vector() for f in features]
    width = len(vectors[0])
    for i, v in enumerate(vectors):
        if len(v) != width:
            raise ValueError(
                f"feature row {i} has length {len(v)}, expected {width}"
            )
    if essay_ids is not None:
        if len(essay_ids) != len(features):
            raise ValueError("essay_ids length must match features")
        order = sorted(range(len(essay_ids)), key=lambda i: essay_ids[i])
        vectors = [vectors[i] for i in order]
        scores = [scores[i] for i in order]
    x = np.asarray(vectors, dtype=float)
    y = np.asarray(scores, dtype=int)
    n = x.shape[0]
    trees = []
    for child in np.random.SeedSequence(seed).spawn(config.n_trees):
        rng = np.random.default_rng(child)
        boot = rng.integers(0, n, size=n)
        trees.append(_grow(x[boot], y[boot], rng, config, depth=0))
    return EnsembleModel(trees=trees, n_features=width, config=config, seed=seed)


def _tree_predict(tree: dict, vec: np.ndarray) -> int:
    node = tree
    while "leaf" not in node:
        if vec[node["feature"]] <= node["threshold"]:
            node = node["left"]
        else:
            node = node["right"]
    return node["leaf"]


def predict(model: EnsembleModel, features: RubricFeatures) -> int:
    """Majority vote over the ensemble; ties resolve to the lower score."""
    vec = np.asarray(features.as_vector(), dtype=float)
    if vec.shape[0] != model.n_features:
        raise ValueError(
            f"feature vector has length {vec.shape[0]} but the model was "
            f"trained on {model.n_features} (spc length mismatch?)"
        )
    votes = np.zeros(MAX_SCORE - MIN_SCORE + 1, dtype=int)
    for tree in model.trees:
        votes[_tree_predict(tree, vec) - MIN_SCORE] += 1
    return int(np.argmax(votes)) + MIN_SCORE


def predict_many(model: EnsembleModel, features: list[RubricFeatures]) -> list[int]:
    return [predict(model, f) for f in features]


def save_model(model: EnsembleModel, path: str | Path) -> None:
    payload = {
        "format": _FORMAT,
        "version": _VERSION,
        "n_features": model.n_features,
        "seed": model.seed,
        "config": {
            "n_trees": model.config.n_trees,
            "max_depth": model.config.max_depth,
            "min_leaf": model.config.min_leaf,
        },
        "trees": model.trees,
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")


def load_model(path: str | Path) -> EnsembleModel:
    path = Path(path)
    obj = json.loads(path.read_text(encoding="utf-8"))
    if obj.get("format") != _FORMAT:
        raise ValueError(f"{path.name}: not a {_FORMAT} model file")
    if obj.get("version") != _VERSION:
        raise ValueError(
            f"{path.name}: unsupported model version {obj.get('version')!r}"
        )
    cfg = obj["config"]
    return EnsembleModel(
        trees=obj["trees"],
        n_features=int(obj["n_features"]),
        config=ForestConfig(
            n_trees=int(cfg["n_trees"]),
            max_depth=cfg["max_depth"],
            min_leaf=int(cfg["min_leaf"]),
        ),
        seed=int(obj["seed"]),
    )
