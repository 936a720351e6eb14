#!/usr/bin/env python3
"""Walkthrough: from raw classifier scores to fitted decision templates.

Two toy base classifiers score a handful of samples over three classes.
We normalize their raw outputs with softmax, stack them into per-sample
decision profiles, fit one template per class, and then look at how the
six similarity measures rank a fresh profile against those templates.
"""

import numpy as np

from dtfusion import (
    EnsembleSpec,
    LabelSpace,
    Measure,
    build_profile,
    fit_templates,
    predict,
    score,
    softmax,
)

space = LabelSpace(("pasta", "soup", "dessert"))
ensemble = EnsembleSpec(("wide_net", "deep_net"))

# Raw last-layer scores for six training samples, two models each.
# Each model is usually confident in the true class, but not always.
raw_scores = [
    # (true class, model-0 logits, model-1 logits)
    ("pasta", [4.0, 1.0, 0.5], [3.2, 0.8, 1.1]),
    ("pasta", [3.1, 1.2, 0.2], [2.7, 1.5, 0.4]),
    ("soup", [0.5, 3.8, 0.9], [1.2, 2.9, 0.7]),
    ("soup", [1.4, 2.6, 0.3], [0.2, 3.5, 1.0]),
    ("dessert", [0.1, 0.7, 3.3], [0.9, 0.2, 2.8]),
    ("dessert", [1.0, 0.1, 2.9], [0.4, 1.3, 3.6]),
]

profiles, labels = [], []
for name, logits_a, logits_b in raw_scores:
    profile = build_profile([softmax(logits_a), softmax(logits_b)])
    profiles.append(profile)
    labels.append(space.index_of(name))

templates = fit_templates(profiles, labels, space, ensemble)
print("fitted templates, one K x C matrix per class:")
for i, name in enumerate(space.class_names):
    print(f"\n  {name} (from {templates.support_counts[i]} samples)")
    print(np.array_str(templates.templates[i], precision=3))

# A test sample the two models disagree on: model 0 says pasta,
# model 1 leans soup.
test_profile = build_profile(
    [softmax([2.6, 2.0, 0.3]), softmax([1.1, 2.4, 0.6])]
)
print("\ntest profile:")
print(np.array_str(np.asarray(test_profile), precision=3))

print("\nper-class scores under each measure:")
header = "  ".join(f"{name:>8}" for name in space.class_names)
print(f"{'measure':>8}  {header}  -> prediction")
for measure in Measure:
    pred = predict(test_profile, templates, measure)
    row = "  ".join(f"{s:8.4f}" for s in pred.scores)
    print(
        f"{measure.value:>8}  {row}  -> {space.class_names[pred.class_index]}"
    )

# The same arithmetic is available piecewise:
value = score("S2", templates.templates[0], test_profile)
print(f"\nS2 against the pasta template, called directly: {value:.4f}")
