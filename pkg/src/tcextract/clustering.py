"""Partitioning Around Medoids (k-medoids) over cosine or euclidean distance.

Small instances are solved exactly by enumerating every candidate medoid
subset; beyond that the classic two-phase PAM takes over: a greedy BUILD
pass seeds the medoids, then SWAP passes exchange a medoid for a
non-medoid whenever the exchange strictly lowers the total
point-to-nearest-medoid distance. Either way the result is swap-local
optimal: no single exchange can improve it further. Ties are always
broken toward the lowest index, so the outcome is fully deterministic
for a given input.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

# enumerate all medoid subsets when there are at most this many; the
# exact answer costs about the same as one SWAP sweep at that size
_EXACT_SUBSET_LIMIT = 1000


@dataclass
class Clustering:
    """A k-medoids solution over the input point array."""

    k: int
    medoid_indices: list[int]
    assignment: list[int]
    objective: float
    converged: bool

    def clusters(self) -> dict[int, list[int]]:
        """Map each medoid index to the indices of its assigned points."""
        out: dict[int, list[int]] = {m: [] for m in self.medoid_indices}
        for idx, medoid in enumerate(self.assignment):
            out[medoid].append(idx)
        return out


def pairwise_distances(points: np.ndarray, metric: str) -> np.ndarray:
    """Dense distance matrix with an exactly zero diagonal."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise ValueError("points must be a 2-d array")
    if metric == "euclidean":
        dist = cdist(points, points, metric="euclidean")
    elif metric == "cosine":
        norms = np.linalg.norm(points, axis=1)
        zero = np.nonzero(norms == 0.0)[0]
        if zero.size:
            raise ValueError(
                f"cosine distance undefined for zero vector at index {zero[0]}"
            )
        dist = cdist(points, points, metric="cosine")
        # cdist can drift a hair outside [0, 2] in floating point
        np.clip(dist, 0.0, 2.0, out=dist)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    np.fill_diagonal(dist, 0.0)
    return dist


def _objective(dist: np.ndarray, medoids: list[int]) -> float:
    return float(dist[:, medoids].min(axis=1).sum())


def _exact(dist: np.ndarray, k: int) -> list[int]:
    """Best medoid subset by enumeration; ties keep the lowest indices."""
    best_obj = math.inf
    best: tuple[int, ...] = ()
    for combo in itertools.combinations(range(dist.shape[0]), k):
        obj = float(dist[:, combo].min(axis=1).sum())
        if obj < best_obj:
            best_obj = obj
            best = combo
    return list(best)


def _build(dist: np.ndarray, k: int) -> list[int]:
    """Greedy seeding: best single medoid, then max-decrease additions."""
    first = int(np.argmin(dist.sum(axis=0)))
    medoids = [first]
    nearest = dist[:, first].copy()
    while len(medoids) < k:
        # gain[c] = total decrease in nearest-distance if c became a medoid
        gain = np.maximum(nearest[:, None] - dist, 0.0).sum(axis=0)
        gain[medoids] = -1.0
        best = int(np.argmax(gain))
        medoids.append(best)
        nearest = np.minimum(nearest, dist[:, best])
    return medoids


def k_medoids(
    points: np.ndarray,
    k: int,
    metric: str = "cosine",
    seed: int = 0,
    max_iter: int = 100,
) -> Clustering:
    """Cluster points around k of their own members.

    When the number of possible medoid subsets is small the optimum is
    found by direct enumeration; otherwise BUILD seeds the medoids and
    SWAP sweeps run until no strictly improving exchange exists or
    max_iter sweeps elapse. The seed parameter is accepted for interface
    stability; both paths are deterministic and consume no randomness.
    """
    del seed
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise ValueError("points must be a 2-d array")
    n = points.shape[0]
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > n:
        raise ValueError(f"k={k} exceeds number of points n={n}")

    dist = pairwise_distances(points, metric)
    if math.comb(n, k) <= _EXACT_SUBSET_LIMIT:
        return _finish(dist, _exact(dist, k), k, converged=True)
    medoids = _build(dist, k)
    current = _objective(dist, medoids)

    converged = False
    for _ in range(max_iter):
        best_delta = 0.0
        best_swap = None
        medoid_cols = dist[:, medoids]
        nearest = medoid_cols.min(axis=1)
        for pos in range(len(medoids)):
            # nearest medoid distance with medoid `pos` removed
            rest = np.delete(medoid_cols, pos, axis=1)
            without = rest.min(axis=1) if rest.size else np.full(n, np.inf)
            # candidate objective for every possible replacement at once
            cand_obj = np.minimum(without[:, None], dist).sum(axis=0)
            cand_obj[medoids] = np.inf
            cand = int(np.argmin(cand_obj))
            delta = float(cand_obj[cand]) - current
            if delta < best_delta - 1e-12:
                best_delta = delta
                best_swap = (pos, cand)
        if best_swap is None:
            converged = True
            break
        pos, cand = best_swap
        proposed = list(medoids)
        proposed[pos] = cand
        # recompute from scratch so accumulated float error cannot admit
        # a swap that does not genuinely lower the objective
        proposed_obj = _objective(dist, proposed)
        if proposed_obj >= current:
            converged = True
            break
        medoids = proposed
        current = proposed_obj

    return _finish(dist, medoids, k, converged=converged)


def _finish(dist: np.ndarray, medoids: list[int], k: int, converged: bool) -> Clustering:
    medoids = sorted(medoids)
    assignment_pos = np.argmin(dist[:, medoids], axis=1)
    assignment = [medoids[p] for p in assignment_pos]
    for m in medoids:
        assignment[m] = m
    return Clustering(
        k=k,
        medoid_indices=medoids,
        assignment=assignment,
        objective=_objective(dist, medoids),
        converged=converged,
    )
