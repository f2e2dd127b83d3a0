from itertools import combinations

import numpy as np
import pytest

from tcextract.clustering import Clustering, k_medoids, pairwise_distances


def exhaustive_best_objective(points: np.ndarray, k: int, metric: str) -> float:
    """Oracle: enumerate every medoid subset and take the best objective."""
    dist = pairwise_distances(points, metric)
    best = np.inf
    for subset in combinations(range(len(points)), k):
        obj = dist[:, subset].min(axis=1).sum()
        best = min(best, obj)
    return float(best)


def no_improving_swap(points: np.ndarray, result: Clustering, metric: str) -> bool:
    """Oracle: check every single medoid/non-medoid exchange."""
    dist = pairwise_distances(points, metric)
    medoids = result.medoid_indices
    others = [i for i in range(len(points)) if i not in medoids]
    for pos in range(len(medoids)):
        for cand in others:
            trial = list(medoids)
            trial[pos] = cand
            obj = dist[:, trial].min(axis=1).sum()
            if obj < result.objective - 1e-9:
                return False
    return True


def test_k_equals_n_gives_zero_objective():
    points = np.array([[0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    result = k_medoids(points, k=3, metric="euclidean")
    assert sorted(result.medoid_indices) == [0, 1, 2]
    assert result.objective == 0.0
    assert result.assignment == [0, 1, 2]


def test_two_separated_1d_groups():
    points = np.array([[0.0], [0.1], [0.2], [10.0], [10.1]])
    result = k_medoids(points, k=2, metric="euclidean")
    clusters = {frozenset(v) for v in result.clusters().values()}
    assert clusters == {frozenset({0, 1, 2}), frozenset({3, 4})}
    assert result.objective == pytest.approx(
        exhaustive_best_objective(points, 2, "euclidean")
    )


def test_deterministic_across_runs():
    rng = np.random.default_rng(11)
    points = rng.normal(size=(30, 4))
    a = k_medoids(points, k=4, metric="cosine", seed=1)
    b = k_medoids(points, k=4, metric="cosine", seed=1)
    assert a.medoid_indices == b.medoid_indices
    assert a.assignment == b.assignment
    assert a.objective == b.objective


def test_matches_exhaustive_on_small_instances():
    rng = np.random.default_rng(7)
    for trial in range(25):
        n = int(rng.integers(4, 13))
        k = int(rng.integers(1, 4))
        dim = int(rng.integers(1, 5))
        metric = "euclidean" if trial % 2 == 0 else "cosine"
        points = rng.normal(size=(n, dim))
        if metric == "cosine":
            # keep vectors clearly nonzero
            points += np.sign(points) * 0.1 + (points == 0) * 0.1
        result = k_medoids(points, k=k, metric=metric)
        best = exhaustive_best_objective(points, k, metric)
        assert result.objective <= best * 1.05 + 1e-12


def test_swap_local_optimality():
    rng = np.random.default_rng(13)
    for trial in range(10):
        n = int(rng.integers(10, 51))
        k = int(rng.integers(2, 6))
        points = rng.normal(size=(n, 3))
        result = k_medoids(points, k=k, metric="euclidean")
        assert result.converged
        assert no_improving_swap(points, result, "euclidean")


def test_assignment_is_nearest_medoid():
    rng = np.random.default_rng(3)
    points = rng.normal(size=(40, 2))
    result = k_medoids(points, k=5, metric="euclidean")
    dist = pairwise_distances(points, "euclidean")
    for i, medoid in enumerate(result.assignment):
        nearest = min(dist[i, m] for m in result.medoid_indices)
        assert dist[i, medoid] == pytest.approx(nearest)
    # objective consistent with the assignment
    recomputed = sum(dist[i, m] for i, m in enumerate(result.assignment))
    assert result.objective == pytest.approx(recomputed, abs=1e-9)


def test_cosine_distance_range():
    points = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    dist = pairwise_distances(points, "cosine")
    assert float(dist.min()) >= 0.0
    assert float(dist.max()) <= 2.0
    assert dist[0, 1] == pytest.approx(2.0)  # opposite vectors


def test_k_larger_than_n_errors():
    with pytest.raises(ValueError, match="exceeds"):
        k_medoids(np.eye(3), k=4)


def test_zero_vector_under_cosine_errors():
    points = np.array([[1.0, 0.0], [0.0, 0.0]])
    with pytest.raises(ValueError, match="zero vector"):
        k_medoids(points, k=1, metric="cosine")


def test_unknown_metric_errors():
    with pytest.raises(ValueError, match="metric"):
        k_medoids(np.eye(3), k=1, metric="manhattan")
