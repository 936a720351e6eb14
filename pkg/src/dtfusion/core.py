"""Core domain objects: label/ensemble descriptors, softmax normalization,
decision-profile assembly and decision-template fitting.

A *decision vector* is one classifier's probability distribution over the C
classes for one sample.  Stacking the K classifiers' vectors for a sample
gives its K-by-C *decision profile*.  Averaging the profiles of all training
samples of a class gives that class's *decision template*; the set of C
templates is the fitted fusion model.

All probabilities are kept in 64-bit floats.  Row sums are accepted within
``ROW_SUM_TOL`` of 1; anything further off is rejected rather than silently
renormalized (callers can opt in to renormalization where external dumps
carry rounded decimals).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyClassError, ShapeError, ValidationError

# Ingestion tolerance on probability row sums.
ROW_SUM_TOL = 1e-6


@dataclass(frozen=True)
class LabelSpace:
    """Ordered set of class names; index of a name is stable and 0-based."""

    class_names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.class_names)
        object.__setattr__(self, "class_names", names)
        if len(names) < 2:
            raise ValidationError(f"need at least 2 classes, got {len(names)}")
        if any(not isinstance(n, str) or not n for n in names):
            raise ValidationError("class names must be non-empty strings")
        if len(set(names)) != len(names):
            raise ValidationError("class names must be unique")

    @property
    def class_count(self) -> int:
        return len(self.class_names)

    def index_of(self, name: str) -> int:
        try:
            return self.class_names.index(name)
        except ValueError:
            raise ValidationError(f"unknown class name: {name!r}") from None

    def check_label(self, label: int) -> int:
        """Validate a crisp label (an integer class index) against this space."""
        if not isinstance(label, (int, np.integer)) or isinstance(label, bool):
            raise ValidationError(f"crisp label must be an integer, got {label!r}")
        if not 0 <= label < self.class_count:
            raise ValidationError(
                f"crisp label {label} outside [0, {self.class_count})"
            )
        return int(label)


@dataclass(frozen=True)
class EnsembleSpec:
    """Ordered set of base-classifier names; index of a name is 0-based."""

    model_names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.model_names)
        object.__setattr__(self, "model_names", names)
        if len(names) < 1:
            raise ValidationError("need at least 1 model")
        if any(not isinstance(n, str) or not n for n in names):
            raise ValidationError("model names must be non-empty strings")
        if len(set(names)) != len(names):
            raise ValidationError("model names must be unique")

    @property
    def model_count(self) -> int:
        return len(self.model_names)


def softmax(logits: Sequence[float] | np.ndarray) -> np.ndarray:
    """Normalize a vector of raw scores into a probability distribution.

    Computed as exp(w_c - max(w)) / sum_i exp(w_i - max(w)); the shift makes
    the exponentials overflow-safe and leaves the result unchanged.

    Raises ValidationError naming the offending index if any entry is NaN or
    infinite.
    """
    values = np.asarray(logits, dtype=np.float64)
    if values.ndim != 1:
        raise ShapeError(f"logits must be 1-D, got shape {values.shape}")
    if values.size == 0:
        raise ShapeError("logits must be non-empty")
    finite = np.isfinite(values)
    if not finite.all():
        bad = int(np.flatnonzero(~finite)[0])
        raise ValidationError(
            f"non-finite logit {values[bad]!r} at index {bad}"
        )
    shifted = values - values.max()
    exps = np.exp(shifted)
    total = math.fsum(exps)
    return exps / total


def validate_decision_vector(
    probs: Sequence[float] | np.ndarray,
    class_count: int | None = None,
    *,
    renormalize: bool = False,
    where: str = "decision vector",
) -> np.ndarray:
    """Check one classifier's probability row and return it as float64.

    The row must have the expected length, entries in [0, 1] and sum to 1
    within ROW_SUM_TOL.  With ``renormalize=True`` a positive off-sum row is
    divided by its sum instead of rejected.
    """
    row = np.asarray(probs, dtype=np.float64)
    if row.ndim != 1:
        raise ShapeError(f"{where}: expected 1-D row, got shape {row.shape}")
    if class_count is not None and row.size != class_count:
        raise ShapeError(
            f"{where}: expected {class_count} probabilities, got {row.size}"
        )
    if not np.isfinite(row).all():
        bad = int(np.flatnonzero(~np.isfinite(row))[0])
        raise ValidationError(f"{where}: non-finite probability at index {bad}")
    if (row < 0.0).any() or (row > 1.0).any():
        bad = int(np.flatnonzero((row < 0.0) | (row > 1.0))[0])
        raise ValidationError(
            f"{where}: probability {row[bad]!r} at index {bad} outside [0, 1]"
        )
    total = math.fsum(row)
    if abs(total - 1.0) > ROW_SUM_TOL:
        if renormalize and total > 0.0:
            row = row / total
        else:
            raise ValidationError(
                f"{where}: probabilities sum to {total!r}, "
                f"outside 1 +/- {ROW_SUM_TOL}"
            )
    return row


def build_profile(
    vectors: Iterable[Sequence[float] | np.ndarray],
    *,
    model_count: int | None = None,
    class_count: int | None = None,
    renormalize: bool = False,
) -> np.ndarray:
    """Stack K decision vectors (ordered by model index) into a K-by-C profile.

    No renormalization is performed unless explicitly requested; a row whose
    sum is off by more than ROW_SUM_TOL is an error.
    """
    rows = [
        validate_decision_vector(
            v, class_count, renormalize=renormalize, where=f"profile row {k}"
        )
        for k, v in enumerate(vectors)
    ]
    if not rows:
        raise ShapeError("profile needs at least one decision vector")
    if model_count is not None and len(rows) != model_count:
        raise ShapeError(f"expected {model_count} rows, got {len(rows)}")
    widths = {r.size for r in rows}
    if len(widths) != 1:
        raise ShapeError(f"rows have inconsistent lengths: {sorted(widths)}")
    profile = np.vstack(rows)
    profile.flags.writeable = False
    return profile


@dataclass(frozen=True)
class DecisionTemplateSet:
    """The fitted fusion model: one mean decision profile per class.

    ``templates`` has shape (C, K, C): templates[c] is the elementwise mean
    of the training profiles whose crisp label is c, and support_counts[c]
    is how many profiles went into that mean.
    """

    label_space: LabelSpace
    ensemble: EnsembleSpec
    templates: np.ndarray
    support_counts: tuple[int, ...]

    def __post_init__(self):
        templates = np.asarray(self.templates, dtype=np.float64)
        templates.flags.writeable = False
        object.__setattr__(self, "templates", templates)
        object.__setattr__(
            self, "support_counts", tuple(int(n) for n in self.support_counts)
        )
        self.validate()

    @property
    def class_count(self) -> int:
        return self.label_space.class_count

    @property
    def model_count(self) -> int:
        return self.ensemble.model_count

    def validate(self) -> None:
        c, k = self.class_count, self.model_count
        if self.templates.shape != (c, k, c):
            raise ShapeError(
                f"templates shape {self.templates.shape} does not match "
                f"(C={c}, K={k}, C={c})"
            )
        if len(self.support_counts) != c:
            raise ShapeError(
                f"expected {c} support counts, got {len(self.support_counts)}"
            )
        if any(n < 1 for n in self.support_counts):
            empty = [
                self.label_space.class_names[i]
                for i, n in enumerate(self.support_counts)
                if n < 1
            ]
            raise EmptyClassError(empty)
        for ci in range(c):
            for ki in range(k):
                validate_decision_vector(
                    self.templates[ci, ki],
                    c,
                    where=f"template {self.label_space.class_names[ci]!r} row {ki}",
                )

    def template_for(self, class_index: int) -> np.ndarray:
        return self.templates[self.label_space.check_label(class_index)]


def fit_templates(
    profiles: Sequence[np.ndarray],
    labels: Sequence[int],
    label_space: LabelSpace,
    ensemble: EnsembleSpec,
) -> DecisionTemplateSet:
    """Fit one decision template per class as the mean profile of that class.

    Accumulation runs in a single pass over samples in ascending index order,
    so the result is bit-reproducible for a given input order.  Every class
    must be represented by at least one sample.
    """
    if len(profiles) != len(labels):
        raise ShapeError(
            f"{len(profiles)} profiles but {len(labels)} labels"
        )
    if not profiles:
        raise ValidationError("cannot fit templates from zero samples")
    c, k = label_space.class_count, ensemble.model_count
    sums = np.zeros((c, k, c), dtype=np.float64)
    counts = np.zeros(c, dtype=np.int64)
    for j, (profile, label) in enumerate(zip(profiles, labels)):
        label = label_space.check_label(label)
        profile = np.asarray(profile, dtype=np.float64)
        if profile.shape != (k, c):
            raise ShapeError(
                f"profile {j}: shape {profile.shape} does not match (K={k}, C={c})"
            )
        sums[label] += profile
        counts[label] += 1
    if (counts == 0).any():
        raise EmptyClassError(
            [label_space.class_names[i] for i in np.flatnonzero(counts == 0)]
        )
    templates = sums / counts[:, None, None]
    return DecisionTemplateSet(
        label_space=label_space,
        ensemble=ensemble,
        templates=templates,
        support_counts=tuple(int(n) for n in counts),
    )
