"""Independent reference implementations used as test oracles.

Everything here is deliberately naive: plain double loops, rational
arithmetic, or literal re-counting.  None of it shares code with the
implementations under test.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

import numpy as np


def naive_measure(tag: str, template, profile) -> float:
    """Double-loop evaluation of one measure over two K-by-C matrices."""
    template = [[float(x) for x in row] for row in template]
    profile = [[float(x) for x in row] for row in profile]
    k, c = len(template), len(template[0])
    cells = [(ki, ci) for ki in range(k) for ci in range(c)]
    if tag == "S1":
        num = sum(min(template[ki][ci], profile[ki][ci]) for ki, ci in cells)
        den = sum(max(template[ki][ci], profile[ki][ci]) for ki, ci in cells)
        return num / den
    if tag == "S2":
        return 1.0 - max(abs(template[ki][ci] - profile[ki][ci]) for ki, ci in cells)
    if tag == "I1":
        num = sum(min(template[ki][ci], profile[ki][ci]) for ki, ci in cells)
        den = sum(template[ki][ci] for ki, ci in cells)
        return num / den
    if tag == "I2":
        return min(
            max(1.0 - template[ki][ci], profile[ki][ci]) for ki, ci in cells
        )
    if tag == "C":
        return max(min(template[ki][ci], profile[ki][ci]) for ki, ci in cells)
    if tag == "N":
        total = sum(
            (template[ki][ci] - profile[ki][ci]) ** 2 for ki, ci in cells
        )
        return 1.0 - total / (k * c)
    raise ValueError(tag)


def rational_measures(template, profile) -> dict[str, Fraction]:
    """All six measures in exact rational arithmetic.

    Inputs are decimal strings (or anything Fraction accepts exactly).
    """
    t = [[Fraction(x) for x in row] for row in template]
    p = [[Fraction(x) for x in row] for row in profile]
    k, c = len(t), len(t[0])
    cells = [(ki, ci) for ki in range(k) for ci in range(c)]
    mins = [min(t[ki][ci], p[ki][ci]) for ki, ci in cells]
    maxs = [max(t[ki][ci], p[ki][ci]) for ki, ci in cells]
    diffs = [t[ki][ci] - p[ki][ci] for ki, ci in cells]
    return {
        "S1": sum(mins) / sum(maxs),
        "S2": 1 - max(abs(d) for d in diffs),
        "I1": sum(mins) / sum(t[ki][ci] for ki, ci in cells),
        "I2": min(max(1 - t[ki][ci], p[ki][ci]) for ki, ci in cells),
        "C": max(mins),
        "N": 1 - sum(d * d for d in diffs) / (k * c),
    }


def naive_argmax(scores) -> int:
    """Lowest-index argmax by linear scan."""
    best, best_i = None, None
    for i, s in enumerate(scores):
        if best is None or s > best:
            best, best_i = s, i
    return best_i


def naive_predict(profile, template_matrices, tag: str) -> tuple[int, list[float]]:
    scores = [naive_measure(tag, t, profile) for t in template_matrices]
    return naive_argmax(scores), scores


def naive_vote(crop_profiles, template_matrices, tag: str) -> int:
    """Independent re-run of the crop-voting protocol.

    Per crop: naive predict.  Most-voted label wins; among tied labels, the
    one whose supporting crops have the larger mean peak probability (the
    maximum entry anywhere in the crop's profile); residual ties fall to the
    lowest class index.
    """
    votes = [naive_predict(p, template_matrices, tag)[0] for p in crop_profiles]
    counts = Counter(votes)
    top = max(counts.values())
    tied = sorted(label for label, n in counts.items() if n == top)
    if len(tied) == 1:
        return tied[0]
    best_label, best_mean = None, None
    for label in tied:  # ascending, so exact mean ties keep the lowest label
        peaks = [
            max(max(row) for row in np.asarray(p).tolist())
            for p, v in zip(crop_profiles, votes)
            if v == label
        ]
        mean = sum(peaks) / len(peaks)
        if best_mean is None or mean > best_mean:
            best_label, best_mean = label, mean
    return best_label


def two_pass_mean_templates(profiles, labels, class_count: int) -> np.ndarray:
    """Gather-then-mean oracle for template fitting."""
    profiles = [np.asarray(p, dtype=np.float64) for p in profiles]
    k, c = profiles[0].shape
    out = np.zeros((class_count, k, c))
    for ci in range(class_count):
        members = [p for p, l in zip(profiles, labels) if l == ci]
        out[ci] = np.mean(np.stack(members), axis=0)
    return out


def naive_confusion(preds, truth, class_count: int) -> list[list[int]]:
    cm = [[0] * class_count for _ in range(class_count)]
    for p, t in zip(preds, truth):
        cm[t][p] += 1
    return cm


def naive_report_values(preds, truth, class_count: int) -> dict:
    """Accuracy and per-class precision/recall/F1 by direct scanning."""
    n = len(truth)
    accuracy = sum(1 for p, t in zip(preds, truth) if p == t) / n
    per_class = []
    for ci in range(class_count):
        tp = sum(1 for p, t in zip(preds, truth) if p == ci and t == ci)
        pred_ci = sum(1 for p in preds if p == ci)
        true_ci = sum(1 for t in truth if t == ci)
        precision = tp / pred_ci if pred_ci else None
        recall = tp / true_ci if true_ci else None
        if precision is None or recall is None or precision + recall == 0:
            f1 = None
        else:
            f1 = 2 * precision * recall / (precision + recall)
        per_class.append(
            {
                "support": true_ci,
                "precision": precision,
                "recall": recall,
                "f1": f1,
            }
        )
    return {"accuracy": accuracy, "per_class": per_class}


def naive_crosstab(fused, base1, base2, truth) -> dict:
    """Stratify-and-count reference for the fused-vs-base cross tabulation."""
    strata = {
        "both_wrong": [],
        "model1_wrong": [],
        "model2_wrong": [],
        "both_fine": [],
    }
    for f, p1, p2, t in zip(fused, base1, base2, truth):
        ok1, ok2 = p1 == t, p2 == t
        if ok1 and ok2:
            key = "both_fine"
        elif ok2:
            key = "model1_wrong"
        elif ok1:
            key = "model2_wrong"
        else:
            key = "both_wrong"
        strata[key].append(f == t)
    out = {}
    for key, hits in strata.items():
        if hits:
            out[key] = {
                "count": len(hits),
                "fused_correct": sum(hits),
                "pct_correct": 100.0 * sum(hits) / len(hits),
            }
        else:
            out[key] = {"count": 0, "fused_correct": 0, "pct_correct": None}
    return out


def random_row_stochastic(rng: np.random.Generator, k: int, c: int) -> np.ndarray:
    return rng.dirichlet(np.ones(c), size=k)
