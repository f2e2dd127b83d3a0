"""
Clustering points and ranking keywords
======================================

A walking tour of the two unsupervised workhorses in this package:
k-medoids clustering and position-biased keyword ranking. Run it top to
bottom; everything prints to the terminal.
"""

import numpy as np

from tcextract import (
    PrParams,
    SourceText,
    extract_keyphrases,
    k_medoids,
    pairwise_distances,
    rank_words,
)

# # Part 1: k-medoids
#
# k-medoids picks k of the input points themselves as cluster centers and
# assigns every point to its nearest center. Unlike k-means the centers
# are always real data points, which matters when a "center" has to be an
# actual attended phrase rather than an average of phrases.

rng = np.random.default_rng(7)
blob_a = rng.normal([0.0, 0.0], 0.3, size=(8, 2))
blob_b = rng.normal([4.0, 0.5], 0.3, size=(8, 2))
blob_c = rng.normal([2.0, 3.0], 0.3, size=(6, 2))
points = np.vstack([blob_a, blob_b, blob_c])

result = k_medoids(points, k=3, metric="euclidean")
print("medoid indices:", result.medoid_indices)
print("objective (total distance to nearest medoid):", round(result.objective, 4))
for medoid, members in sorted(result.clusters().items()):
    print(f"  medoid {medoid} at {np.round(points[medoid], 2)} "
          f"owns {len(members)} points")

# The solution is exact on a problem this small: compare against the
# best of all possible medoid triples.

import itertools

dist = pairwise_distances(points, "euclidean")
best = min(
    float(dist[:, combo].min(axis=1).sum())
    for combo in itertools.combinations(range(len(points)), 3)
)
print("exhaustive best objective:", round(best, 4), "(matches)")

# Cosine distance is the default elsewhere in the package because the
# clustered vectors are learned representations where direction, not
# magnitude, carries the meaning.

directions = np.array([[1.0, 0.0], [0.9, 0.1], [0.0, 1.0], [0.1, 0.9]])
by_angle = k_medoids(directions, k=2, metric="cosine")
print("\ncosine clustering of 4 direction vectors:", by_angle.assignment)

# # Part 2: position-biased keyword ranking
#
# Words become graph nodes, co-occurrence within a sliding window becomes
# edges, and a PageRank walk with restarts biased toward early-appearing
# words produces the scores. Early mentions are usually what a passage
# is about, and the bias bakes that in.

passage = (
    "The village clinic reopened with solar power. Solar panels run the "
    "clinic fridge, and the fridge keeps vaccines cold. Cold vaccines "
    "reach children in every village. The program also trains farmers, "
    "and farmers sell surplus maize to the school kitchen."
)
source = SourceText.from_raw("village", passage)

ranked = rank_words(source)
print("\ntop ranked words:")
for word, score in list(ranked)[:8]:
    print(f"  {word:<10} {score:.4f}")

# Keyphrases are maximal runs of adjacent candidate words; each phrase
# scores the sum of its member words, and a phrase swallowed by a
# higher-scoring longer phrase is dropped.

phrases = extract_keyphrases(source, ranked, PrParams(max_phrase_len=3))
print("\ntop keyphrases:")
for phrase, score in phrases[:6]:
    print(f"  {' '.join(phrase):<22} {score:.4f}")
