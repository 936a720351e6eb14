"""Evaluation metrics: confusion matrix, accuracy / precision / recall / F1,
and the fused-vs-base cross tabulation.

Undefined ratios (zero denominators) are reported as absent values with a
reason string instead of being coerced to 0 or 1, so macro summaries are
never silently distorted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ShapeError, ValidationError

CROSSTAB_STRATA = ("both_wrong", "model1_wrong", "model2_wrong", "both_fine")


def confusion(
    preds: Sequence[int],
    truth: Sequence[int],
    class_count: int,
) -> np.ndarray:
    """Tabulate counts[t][p] = number of samples with true class t predicted p."""
    if len(preds) != len(truth):
        raise ShapeError(f"{len(preds)} predictions but {len(truth)} labels")
    cm = np.zeros((class_count, class_count), dtype=np.int64)
    for i, (p, t) in enumerate(zip(preds, truth)):
        p, t = int(p), int(t)
        if not 0 <= p < class_count:
            raise ValidationError(f"sample {i}: predicted index {p} outside [0, {class_count})")
        if not 0 <= t < class_count:
            raise ValidationError(f"sample {i}: true index {t} outside [0, {class_count})")
        cm[t, p] += 1
    return cm


@dataclass(frozen=True)
class ClassMetrics:
    """Precision / recall / F1 for one class; None means undefined, see reasons."""

    name: str
    support: int
    precision: float | None
    recall: float | None
    f1: float | None
    reasons: dict

    def as_dict(self) -> dict:
        out = {
            "class": self.name,
            "support": self.support,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }
        if self.reasons:
            out["undefined"] = dict(self.reasons)
        return out


@dataclass(frozen=True)
class EvaluationReport:
    """Overall accuracy / error rate plus one ClassMetrics record per class."""

    overall_accuracy: float
    error_rate: float
    sample_count: int
    per_class: tuple[ClassMetrics, ...]
    measure: str | None = None
    crop_mode: str | None = None

    def as_dict(self) -> dict:
        return {
            "measure": self.measure,
            "crop_mode": self.crop_mode,
            "sample_count": self.sample_count,
            "overall_accuracy": self.overall_accuracy,
            "error_rate": self.error_rate,
            "per_class": [c.as_dict() for c in self.per_class],
        }


def report(
    cm: np.ndarray,
    *,
    class_names: Sequence[str] | None = None,
    measure: str | None = None,
    crop_mode: str | None = None,
) -> EvaluationReport:
    """Turn a confusion matrix into an evaluation report.

    accuracy = trace/total; per class, precision = diag/column sum and
    recall = diag/row sum, with F1 their harmonic mean where both are
    defined and nonzero.
    """
    cm = np.asarray(cm)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1]:
        raise ShapeError(f"confusion matrix must be square, got {cm.shape}")
    total = int(cm.sum())
    if total == 0:
        raise ValidationError("cannot report on an empty confusion matrix")
    c = cm.shape[0]
    if class_names is None:
        class_names = [str(i) for i in range(c)]
    elif len(class_names) != c:
        raise ShapeError(f"{len(class_names)} class names for {c} classes")

    accuracy = float(np.trace(cm)) / total
    per_class = []
    for i in range(c):
        tp = int(cm[i, i])
        col = int(cm[:, i].sum())
        row = int(cm[i, :].sum())
        reasons = {}
        if col > 0:
            precision = tp / col
        else:
            precision = None
            reasons["precision"] = "no samples predicted as this class"
        if row > 0:
            recall = tp / row
        else:
            recall = None
            reasons["recall"] = "no samples of this class"
        if precision is None or recall is None:
            f1 = None
            reasons["f1"] = "precision or recall undefined"
        elif precision + recall == 0.0:
            f1 = None
            reasons["f1"] = "precision and recall both zero"
        else:
            f1 = 2.0 * precision * recall / (precision + recall)
        per_class.append(
            ClassMetrics(
                name=str(class_names[i]),
                support=row,
                precision=precision,
                recall=recall,
                f1=f1,
                reasons=reasons,
            )
        )
    return EvaluationReport(
        overall_accuracy=accuracy,
        error_rate=1.0 - accuracy,
        sample_count=total,
        per_class=tuple(per_class),
        measure=measure,
        crop_mode=crop_mode,
    )


@dataclass(frozen=True)
class StratumCell:
    """Fused outcome within one base-correctness stratum."""

    key: str
    count: int
    fused_correct: int
    pct_correct: float | None
    pct_wrong: float | None

    def as_dict(self) -> dict:
        return {
            "stratum": self.key,
            "count": self.count,
            "fused_correct": self.fused_correct,
            "fused_wrong": self.count - self.fused_correct,
            "pct_well_classified": self.pct_correct,
            "pct_misclassified": self.pct_wrong,
        }


@dataclass(frozen=True)
class FusionCrossTab:
    """Percentage of samples the fusion got right, split by which base
    classifiers were individually right (exactly two base models)."""

    strata: tuple[StratumCell, ...]
    model_names: tuple[str, str] | None = None
    measure: str | None = None

    def as_dict(self) -> dict:
        return {
            "measure": self.measure,
            "models": list(self.model_names) if self.model_names else None,
            "strata": [s.as_dict() for s in self.strata],
        }


def crosstab(
    fused: Sequence[int],
    base_preds: Sequence[Sequence[int]],
    truth: Sequence[int],
    *,
    model_names: tuple[str, str] | None = None,
    measure: str | None = None,
) -> FusionCrossTab:
    """Stratify samples by (base 1 correct?, base 2 correct?) and report the
    percentage of fused predictions that are right within each stratum.

    Only the two-base-model layout is supported; wider ensembles should fall
    back to per-model reports.
    """
    if len(base_preds) != 2:
        raise ValidationError(
            f"cross tabulation supports exactly 2 base models, got {len(base_preds)}; "
            "use per-model reports instead"
        )
    b1, b2 = base_preds
    n = len(truth)
    if len(fused) != n or len(b1) != n or len(b2) != n:
        raise ShapeError(
            f"misaligned lengths: fused={len(fused)}, base1={len(b1)}, "
            f"base2={len(b2)}, truth={n}"
        )
    counts = {key: 0 for key in CROSSTAB_STRATA}
    correct = {key: 0 for key in CROSSTAB_STRATA}
    for f, p1, p2, t in zip(fused, b1, b2, truth):
        ok1, ok2 = int(p1) == int(t), int(p2) == int(t)
        if ok1 and ok2:
            key = "both_fine"
        elif ok2:
            key = "model1_wrong"
        elif ok1:
            key = "model2_wrong"
        else:
            key = "both_wrong"
        counts[key] += 1
        if int(f) == int(t):
            correct[key] += 1
    strata = []
    for key in CROSSTAB_STRATA:
        n_s, ok_s = counts[key], correct[key]
        if n_s > 0:
            pct_ok = 100.0 * ok_s / n_s
            pct_bad = 100.0 * (n_s - ok_s) / n_s
        else:
            pct_ok = pct_bad = None
        strata.append(
            StratumCell(
                key=key,
                count=n_s,
                fused_correct=ok_s,
                pct_correct=pct_ok,
                pct_wrong=pct_bad,
            )
        )
    return FusionCrossTab(
        strata=tuple(strata), model_names=model_names, measure=measure
    )
