"""Per-sample prediction against a fitted template set, plus crop voting.

The decision rule scores a sample's K-by-C profile against every class
template under one similarity measure and picks the class with the highest
score; argmax ties fall to the lowest class index so results never depend on
iteration order.

Multi-crop evaluation feeds one profile per crop: every crop casts a vote,
the most-voted label wins, and vote ties are broken by the tied labels'
average peak probability (see ``vote_crops``).
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import fsum
from typing import Sequence

import numpy as np

from .core import DecisionTemplateSet
from .errors import ShapeError, ValidationError
from .similarity import Measure, score


@dataclass(frozen=True)
class Prediction:
    """Predicted class index plus the per-class scores that produced it."""

    class_index: int
    scores: tuple[float, ...]
    measure: Measure


@dataclass(frozen=True)
class CropGroup:
    """All crop profiles of one sample, ordered by ascending crop id."""

    sample_id: str
    profiles: tuple[np.ndarray, ...]
    crop_ids: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "profiles", tuple(self.profiles))
        if not self.profiles:
            raise ValidationError(f"sample {self.sample_id!r}: empty crop list")
        shapes = {p.shape for p in self.profiles}
        if len(shapes) != 1:
            raise ShapeError(
                f"sample {self.sample_id!r}: inconsistent profile shapes {sorted(shapes)}"
            )
        if self.crop_ids is not None:
            ids = tuple(int(i) for i in self.crop_ids)
            object.__setattr__(self, "crop_ids", ids)
            if len(ids) != len(self.profiles):
                raise ShapeError(
                    f"sample {self.sample_id!r}: {len(ids)} crop ids for "
                    f"{len(self.profiles)} profiles"
                )

    def profile_for_crop(self, crop_id: int) -> np.ndarray:
        """Profile of one specific crop (used by single-crop evaluation)."""
        if self.crop_ids is None:
            raise ValidationError(
                f"sample {self.sample_id!r}: crop ids unknown for this group"
            )
        try:
            return self.profiles[self.crop_ids.index(crop_id)]
        except ValueError:
            raise ValidationError(
                f"sample {self.sample_id!r}: no crop with id {crop_id}"
            ) from None


def _check_profile_shape(profile: np.ndarray, templates: DecisionTemplateSet, where: str):
    expected = (templates.model_count, templates.class_count)
    if profile.shape != expected:
        raise ShapeError(
            f"{where}: profile shape {profile.shape} does not match "
            f"templates (K={expected[0]}, C={expected[1]})"
        )


def predict(
    profile: np.ndarray,
    templates: DecisionTemplateSet,
    measure: Measure | str,
) -> Prediction:
    """Score the profile against every class template and take the argmax.

    Ties on the maximum score resolve to the lowest class index.
    """
    if not isinstance(measure, Measure):
        measure = Measure.parse(measure)
    profile = np.asarray(profile, dtype=np.float64)
    _check_profile_shape(profile, templates, "predict")
    scores = tuple(
        score(measure, templates.templates[c], profile)
        for c in range(templates.class_count)
    )
    best = max(scores)
    return Prediction(
        class_index=scores.index(best), scores=scores, measure=measure
    )


def vote_crops(
    group: CropGroup,
    templates: DecisionTemplateSet,
    measure: Measure | str,
) -> Prediction:
    """Majority vote over the group's per-crop predictions.

    When several labels tie on vote count, each tied label gets the mean,
    over the crops that voted for it, of that crop's highest probability
    anywhere in its profile; the label with the larger mean wins.  A residual
    exact tie falls to the lowest class index.  The returned scores are those
    of the first crop (in crop order) that voted for the winning label.
    """
    if not isinstance(measure, Measure):
        measure = Measure.parse(measure)
    votes = [predict(p, templates, measure) for p in group.profiles]
    counts = Counter(p.class_index for p in votes)
    top = max(counts.values())
    tied = sorted(label for label, n in counts.items() if n == top)
    if len(tied) > 1:
        def mean_peak(label: int) -> float:
            peaks = [
                float(profile.max())
                for profile, pred in zip(group.profiles, votes)
                if pred.class_index == label
            ]
            return fsum(peaks) / len(peaks)

        best_mean = max(mean_peak(label) for label in tied)
        winner = next(label for label in tied if mean_peak(label) == best_mean)
    else:
        winner = tied[0]
    first = next(p for p in votes if p.class_index == winner)
    return Prediction(class_index=winner, scores=first.scores, measure=measure)


def majority_vote_argmax(vectors: Sequence[np.ndarray]) -> int:
    """Majority vote over the argmaxes of plain probability vectors.

    Uses the same tie-break as ``vote_crops`` (mean peak probability over the
    supporting crops, then lowest index); this is the crop-voted baseline for
    a single model evaluated on its own rows, without templates.
    """
    if len(vectors) == 0:
        raise ValidationError("empty crop list")
    votes = [int(np.argmax(v)) for v in vectors]
    counts = Counter(votes)
    top = max(counts.values())
    tied = sorted(label for label, n in counts.items() if n == top)
    if len(tied) == 1:
        return tied[0]

    def mean_peak(label: int) -> float:
        peaks = [
            float(v.max()) for v, vote in zip(vectors, votes) if vote == label
        ]
        return fsum(peaks) / len(peaks)

    best_mean = max(mean_peak(label) for label in tied)
    return next(label for label in tied if mean_peak(label) == best_mean)


def predict_batch(
    profiles: Sequence[np.ndarray],
    templates: DecisionTemplateSet,
    measure: Measure | str,
    *,
    workers: int | None = None,
) -> list[Prediction]:
    """Elementwise ``predict`` with order preserved.

    ``workers`` > 1 spreads samples over a thread pool; the output is
    identical to the sequential run either way.
    """
    if not isinstance(measure, Measure):
        measure = Measure.parse(measure)
    arrays = []
    expected = (templates.model_count, templates.class_count)
    for i, profile in enumerate(profiles):
        profile = np.asarray(profile, dtype=np.float64)
        if profile.shape != expected:
            raise ShapeError(
                f"sample {i}: profile shape {profile.shape} does not match "
                f"templates (K={expected[0]}, C={expected[1]})"
            )
        arrays.append(profile)
    if workers is not None and workers > 1 and len(arrays) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda p: predict(p, templates, measure), arrays))
    return [predict(p, templates, measure) for p in arrays]
