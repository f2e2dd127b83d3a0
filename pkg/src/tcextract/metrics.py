"""Agreement and correlation metrics for score evaluation.

Quadratic weighted kappa measures rater agreement with squared-distance
penalties; Pearson's r relates individual features to gold scores. Both
are implemented directly from their closed forms so they can be checked
against independent oracles. An EvalReport bundles the numbers and
serializes to JSON or an aligned text table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


def qwk(gold, pred, min_score: int = 1, max_score: int = 4) -> float:
    """Quadratic weighted kappa: 1 - sum(w*O) / sum(w*E).

    O is the observed confusion matrix, E the outer product of its
    marginals normalized to the same total, and w_ij = (i-j)^2/(R-1)^2.
    Perfect agreement gives 1; a degenerate zero expected disagreement
    (both raters constant) also gives 1 because the observed
    disagreement is then zero as well.
    """
    gold = list(gold)
    pred = list(pred)
    if len(gold) != len(pred):
        raise ValueError(f"length mismatch: {len(gold)} gold vs {len(pred)} pred")
    if not gold:
        raise ValueError("need at least one rating pair")
    r = max_score - min_score + 1
    for v in gold + pred:
        if not min_score <= v <= max_score:
            raise ValueError(f"rating {v} outside [{min_score},{max_score}]")
    if r == 1:
        return 1.0
    observed = np.zeros((r, r))
    for g, p in zip(gold, pred):
        observed[g - min_score, p - min_score] += 1.0
    expected = np.outer(observed.sum(axis=1), observed.sum(axis=0)) / observed.sum()
    idx = np.arange(r)
    weights = (idx[:, None] - idx[None, :]) ** 2 / (r - 1) ** 2
    num = float((weights * observed).sum())
    den = float((weights * expected).sum())
    if den == 0.0:
        return 1.0
    return 1.0 - num / den


def pearson_r(x, y) -> float:
    """Sample Pearson correlation; errors on zero variance."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be equal-length 1-d sequences")
    if x.shape[0] < 2:
        raise ValueError("need at least 2 observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt((dx**2).sum()))
    sy = float(np.sqrt((dy**2).sum()))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("correlation undefined for zero-variance input")
    r = float((dx * dy).sum() / (sx * sy))
    return max(-1.0, min(1.0, r))


def paired_bootstrap_pvalue(
    gold, pred_a, pred_b, n_resamples: int = 10000, seed: int = 0
) -> float:
    """One-sided bootstrap p-value for QWK(a) > QWK(b) over paired essays.

    Resamples essays with replacement and counts how often model a fails
    to beat model b. Auxiliary diagnostic, not a calibrated test.
    """
    gold = np.asarray(list(gold))
    pred_a = np.asarray(list(pred_a))
    pred_b = np.asarray(list(pred_b))
    if not (gold.shape == pred_a.shape == pred_b.shape):
        raise ValueError("gold, pred_a, pred_b must have equal lengths")
    n = gold.shape[0]
    if n < 2:
        raise ValueError("need at least 2 essays")
    rng = np.random.default_rng(seed)
    worse = 0
    for _ in range(n_resamples):
        idx = rng.integers(0, n, size=n)
        g = gold[idx]
        if qwk(g, pred_a[idx]) <= qwk(g, pred_b[idx]):
            worse += 1
    return (worse + 1) / (n_resamples + 1)


@dataclass
class EvalReport:
    qwk: float
    pearson_by_feature: dict[str, float]
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("a report needs n >= 2 essays")

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "pearson_by_feature": self.pearson_by_feature,
                "qwk": self.qwk,
            },
            indent=2,
            sort_keys=True,
        ) + "\n"

    def to_text(self) -> str:
        lines = [
            "evaluation report",
            f"  essays   {self.n}",
            f"  qwk      {self.qwk:+.4f}",
        ]
        if self.pearson_by_feature:
            lines.append("  pearson r vs gold score")
            width = max(len(name) for name in self.pearson_by_feature)
            for name in sorted(self.pearson_by_feature):
                value = self.pearson_by_feature[name]
                lines.append(f"    {name:<{width}}  {value:+.4f}")
        return "\n".join(lines) + "\n"

    def save(self, json_path: str | Path, text_path: str | Path | None = None) -> None:
        Path(json_path).write_text(self.to_json(), encoding="utf-8")
        if text_path is not None:
            Path(text_path).write_text(self.to_text(), encoding="utf-8")


def load_report(path: str | Path) -> EvalReport:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    return EvalReport(
        qwk=float(obj["qwk"]),
        pearson_by_feature={k: float(v) for k, v in obj["pearson_by_feature"].items()},
        n=int(obj["n"]),
    )
