"""On-disk formats: prediction dumps, label sidecars, fitted templates,
predictions and reports.

All tabular formats are tab-separated text with a versioned header block so
that exporters written in other ecosystems can emit them without a binary
dependency.  Floats are serialized with ``repr``, i.e. the shortest decimal
string that round-trips the exact 64-bit value, so write -> read is
bit-exact.  Every malformed input is reported as a ``FormatError`` (or a
``ValidationError`` for semantic violations) carrying the file path and,
where meaningful, the 1-based line number; readers never return partially
constructed data.

Dump format::

    #dtfusion-dump v1
    #models<TAB>m1<TAB>m2
    #classes<TAB>c1<TAB>...<TAB>cC
    sample_id<TAB>crop_id<TAB>model_index<TAB>p_1<TAB>...<TAB>p_C

Every (sample_id, crop_id) pair must carry exactly one row per model.
Sample ids are opaque strings; they may not be empty, contain tabs or
newlines, or start with '#'.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .core import (
    DecisionTemplateSet,
    EnsembleSpec,
    LabelSpace,
    build_profile,
    validate_decision_vector,
)
from .errors import FormatError, ValidationError
from .inference import CropGroup, Prediction
from .metrics import EvaluationReport, FusionCrossTab
from .similarity import Measure

DUMP_MAGIC = "#dtfusion-dump v1"
LABELS_MAGIC = "#dtfusion-labels v1"
TEMPLATES_MAGIC = "#dtfusion-templates v1"
PREDICTIONS_MAGIC = "#dtfusion-predictions v1"


@dataclass(frozen=True)
class DumpData:
    """Parsed prediction dump: who predicted, over what classes, and the
    per-sample crop groups (keyed and ordered by sample id)."""

    ensemble: EnsembleSpec
    label_space: LabelSpace
    groups: dict[str, CropGroup]

    @property
    def sample_ids(self) -> list[str]:
        return list(self.groups)


def _fmt(x: float) -> str:
    return repr(float(x))


def _check_sample_id(sample_id: str) -> str:
    if not sample_id:
        raise ValidationError("sample_id must be non-empty")
    if any(ch in sample_id for ch in "\t\n\r"):
        raise ValidationError(f"sample_id {sample_id!r} contains tab or newline")
    if sample_id.startswith("#"):
        raise ValidationError(f"sample_id {sample_id!r} may not start with '#'")
    return sample_id


def _read_lines(path) -> list[str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc}", path=path) from exc
    return text.split("\n")


def _parse_header(
    lines: list[str], magic: str, path, required: Sequence[str]
) -> tuple[dict[str, list[str]], int]:
    """Parse the leading '#' block; returns (header fields, first data line index)."""
    if not lines or lines[0].strip() != magic:
        got = lines[0].strip() if lines else "<empty file>"
        raise FormatError(
            f"bad or missing format line: expected {magic!r}, got {got!r}",
            path=path,
            line=1,
        )
    fields: dict[str, list[str]] = {}
    i = 1
    while i < len(lines) and lines[i].startswith("#"):
        parts = lines[i][1:].split("\t")
        key = parts[0]
        if key in fields:
            raise FormatError(f"duplicate header field {key!r}", path=path, line=i + 1)
        fields[key] = parts[1:]
        i += 1
    for key in required:
        if key not in fields:
            raise FormatError(f"missing header field #{key}", path=path, line=i)
    return fields, i


def read_dump(path, *, renormalize: bool = False) -> DumpData:
    """Parse and fully validate a prediction dump.

    Crops are ordered by crop id and profile rows by model index regardless
    of the row order in the file, so any two dumps holding the same records
    parse to identical structures.
    """
    lines = _read_lines(path)
    fields, start = _parse_header(lines, DUMP_MAGIC, path, ["models", "classes"])
    ensemble = _ensemble_from_header(fields["models"], path)
    label_space = _label_space_from_header(fields["classes"], path)
    k, c = ensemble.model_count, label_space.class_count

    rows: dict[tuple[str, int], dict[int, np.ndarray]] = {}
    for lineno in range(start, len(lines)):
        line = lines[lineno]
        if not line.strip():
            continue
        if line.startswith("#"):
            raise FormatError(
                "header line after data section", path=path, line=lineno + 1
            )
        parts = line.split("\t")
        if len(parts) != 3 + c:
            raise FormatError(
                f"expected {3 + c} fields (sample, crop, model, {c} probabilities), "
                f"got {len(parts)}",
                path=path,
                line=lineno + 1,
            )
        sample_id = parts[0]
        try:
            _check_sample_id(sample_id)
        except ValidationError as exc:
            raise FormatError(str(exc), path=path, line=lineno + 1) from None
        try:
            crop_id = int(parts[1])
        except ValueError:
            raise FormatError(
                f"crop_id {parts[1]!r} is not an integer", path=path, line=lineno + 1
            ) from None
        if crop_id < 0:
            raise FormatError(
                f"crop_id {crop_id} is negative", path=path, line=lineno + 1
            )
        try:
            model_index = int(parts[2])
        except ValueError:
            raise FormatError(
                f"model_index {parts[2]!r} is not an integer",
                path=path,
                line=lineno + 1,
            ) from None
        if not 0 <= model_index < k:
            raise FormatError(
                f"model_index {model_index} outside [0, {k})",
                path=path,
                line=lineno + 1,
            )
        try:
            probs = np.array([float(p) for p in parts[3:]], dtype=np.float64)
        except ValueError as exc:
            raise FormatError(
                f"bad probability value: {exc}", path=path, line=lineno + 1
            ) from None
        try:
            probs = validate_decision_vector(
                probs, c, renormalize=renormalize, where="probabilities"
            )
        except ValidationError as exc:
            raise FormatError(str(exc), path=path, line=lineno + 1) from None
        key = (sample_id, crop_id)
        per_model = rows.setdefault(key, {})
        if model_index in per_model:
            raise FormatError(
                f"duplicate row for sample {sample_id!r} crop {crop_id} "
                f"model {model_index}",
                path=path,
                line=lineno + 1,
            )
        per_model[model_index] = probs

    if not rows:
        raise ValidationError(f"{path}: dump contains no data rows")

    by_sample: dict[str, dict[int, dict[int, np.ndarray]]] = {}
    for (sample_id, crop_id), per_model in rows.items():
        by_sample.setdefault(sample_id, {})[crop_id] = per_model
    groups: dict[str, CropGroup] = {}
    for sample_id in sorted(by_sample):
        crops = by_sample[sample_id]
        profiles = []
        crop_ids = []
        for crop_id in sorted(crops):
            per_model = crops[crop_id]
            missing = [m for m in range(k) if m not in per_model]
            if missing:
                raise FormatError(
                    f"missing model row(s) {missing} for sample {sample_id!r} "
                    f"crop {crop_id}",
                    path=path,
                )
            profiles.append(
                build_profile(
                    [per_model[m] for m in range(k)], model_count=k, class_count=c
                )
            )
            crop_ids.append(crop_id)
        groups[sample_id] = CropGroup(
            sample_id=sample_id,
            profiles=tuple(profiles),
            crop_ids=tuple(crop_ids),
        )
    return DumpData(ensemble=ensemble, label_space=label_space, groups=groups)


def _ensemble_from_header(names: list[str], path) -> EnsembleSpec:
    try:
        return EnsembleSpec(tuple(names))
    except ValidationError as exc:
        raise FormatError(f"bad #models header: {exc}", path=path) from None


def _label_space_from_header(names: list[str], path) -> LabelSpace:
    try:
        return LabelSpace(tuple(names))
    except ValidationError as exc:
        raise FormatError(f"bad #classes header: {exc}", path=path) from None


def write_dump(dump: DumpData, path) -> None:
    """Write a dump in canonical order: samples, then crops, then models."""
    out = [DUMP_MAGIC]
    out.append("#models\t" + "\t".join(dump.ensemble.model_names))
    out.append("#classes\t" + "\t".join(dump.label_space.class_names))
    k, c = dump.ensemble.model_count, dump.label_space.class_count
    for sample_id in sorted(dump.groups):
        group = dump.groups[sample_id]
        _check_sample_id(sample_id)
        crop_ids = group.crop_ids
        if crop_ids is None:
            crop_ids = tuple(range(len(group.profiles)))
        for crop_id, profile in sorted(
            zip(crop_ids, group.profiles), key=lambda pair: pair[0]
        ):
            if profile.shape != (k, c):
                raise ValidationError(
                    f"sample {sample_id!r}: profile shape {profile.shape} does "
                    f"not match header (K={k}, C={c})"
                )
            for m in range(profile.shape[0]):
                out.append(
                    "\t".join(
                        [sample_id, str(crop_id), str(m)]
                        + [_fmt(p) for p in profile[m]]
                    )
                )
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def read_labels(path) -> dict[str, str]:
    """Parse a label sidecar into an ordered sample_id -> class_name mapping."""
    lines = _read_lines(path)
    _, start = _parse_header(lines, LABELS_MAGIC, path, [])
    labels: dict[str, str] = {}
    for lineno in range(start, len(lines)):
        line = lines[lineno]
        if not line.strip():
            continue
        if line.startswith("#"):
            raise FormatError(
                "header line after data section", path=path, line=lineno + 1
            )
        parts = line.split("\t")
        if len(parts) != 2:
            raise FormatError(
                f"expected 2 fields (sample_id, class_name), got {len(parts)}",
                path=path,
                line=lineno + 1,
            )
        sample_id, class_name = parts
        if sample_id in labels:
            raise FormatError(
                f"duplicate label for sample {sample_id!r}", path=path, line=lineno + 1
            )
        if not class_name:
            raise FormatError("empty class name", path=path, line=lineno + 1)
        labels[sample_id] = class_name
    return labels


def write_labels(labels: Mapping[str, str], path) -> None:
    out = [LABELS_MAGIC]
    for sample_id in sorted(labels):
        _check_sample_id(sample_id)
        out.append(f"{sample_id}\t{labels[sample_id]}")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def align_labels(
    dump: DumpData, labels: Mapping[str, str]
) -> list[int]:
    """Resolve sidecar labels to class indices aligned with the dump's groups.

    Both directions are strict: every dump sample needs a label, and every
    labeled sample must exist in the dump.
    """
    unknown = sorted(set(labels) - set(dump.groups))
    if unknown:
        raise ValidationError(
            "labels reference sample(s) absent from the dump: "
            + ", ".join(repr(s) for s in unknown[:5])
            + ("..." if len(unknown) > 5 else "")
        )
    missing = sorted(set(dump.groups) - set(labels))
    if missing:
        raise ValidationError(
            "no label for sample(s): "
            + ", ".join(repr(s) for s in missing[:5])
            + ("..." if len(missing) > 5 else "")
        )
    return [
        dump.label_space.index_of(labels[sample_id]) for sample_id in dump.groups
    ]


def write_templates(templates: DecisionTemplateSet, path) -> None:
    """Serialize a fitted template set with full 64-bit precision."""
    templates.validate()
    out = [TEMPLATES_MAGIC]
    out.append("#models\t" + "\t".join(templates.ensemble.model_names))
    out.append("#classes\t" + "\t".join(templates.label_space.class_names))
    out.append("#supports\t" + "\t".join(str(n) for n in templates.support_counts))
    for ci, name in enumerate(templates.label_space.class_names):
        out.append(f"#template\t{ci}\t{name}")
        for row in templates.templates[ci]:
            out.append("\t".join(_fmt(p) for p in row))
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def read_templates(path) -> DecisionTemplateSet:
    """Parse a template file; shape or row-sum corruption fails validation."""
    lines = _read_lines(path)
    if not lines or lines[0].strip() != TEMPLATES_MAGIC:
        got = lines[0].strip() if lines else "<empty file>"
        raise FormatError(
            f"bad or missing format line: expected {TEMPLATES_MAGIC!r}, got {got!r}",
            path=path,
            line=1,
        )
    header: dict[str, list[str]] = {}
    i = 1
    while i < len(lines) and lines[i].startswith("#") and not lines[i].startswith(
        "#template"
    ):
        parts = lines[i][1:].split("\t")
        if parts[0] in header:
            raise FormatError(
                f"duplicate header field {parts[0]!r}", path=path, line=i + 1
            )
        header[parts[0]] = parts[1:]
        i += 1
    for key in ("models", "classes", "supports"):
        if key not in header:
            raise FormatError(f"missing header field #{key}", path=path, line=i)
    ensemble = _ensemble_from_header(header["models"], path)
    label_space = _label_space_from_header(header["classes"], path)
    k, c = ensemble.model_count, label_space.class_count
    try:
        supports = tuple(int(s) for s in header["supports"])
    except ValueError:
        raise FormatError("non-integer support count", path=path) from None
    if len(supports) != c:
        raise FormatError(
            f"expected {c} support counts, got {len(supports)}", path=path
        )

    matrices = np.zeros((c, k, c), dtype=np.float64)
    for ci in range(c):
        if i >= len(lines) or not lines[i].startswith("#template\t"):
            raise FormatError(
                f"expected '#template' marker for class {ci}", path=path, line=i + 1
            )
        marker = lines[i].split("\t")
        if len(marker) < 2 or marker[1] != str(ci):
            raise FormatError(
                f"template markers out of order: expected class {ci}",
                path=path,
                line=i + 1,
            )
        i += 1
        for ki in range(k):
            if i >= len(lines):
                raise FormatError(
                    f"unexpected end of file inside template {ci}", path=path, line=i
                )
            parts = lines[i].split("\t")
            if len(parts) != c:
                raise FormatError(
                    f"expected {c} values in template row, got {len(parts)}",
                    path=path,
                    line=i + 1,
                )
            try:
                matrices[ci, ki] = [float(p) for p in parts]
            except ValueError as exc:
                raise FormatError(
                    f"bad template value: {exc}", path=path, line=i + 1
                ) from None
            i += 1
    for lineno in range(i, len(lines)):
        if lines[lineno].strip():
            raise FormatError(
                "unexpected trailing content", path=path, line=lineno + 1
            )
    return DecisionTemplateSet(
        label_space=label_space,
        ensemble=ensemble,
        templates=matrices,
        support_counts=supports,
    )


def write_predictions(
    predictions: Mapping[str, Prediction],
    label_space: LabelSpace,
    measure: Measure,
    crop_mode: str,
    path,
) -> None:
    """Write one row per sample: id, predicted class name, per-class scores."""
    out = [PREDICTIONS_MAGIC]
    out.append(f"#measure\t{measure.value}")
    out.append(f"#crops\t{crop_mode}")
    out.append("#classes\t" + "\t".join(label_space.class_names))
    for sample_id, pred in predictions.items():
        _check_sample_id(sample_id)
        out.append(
            "\t".join(
                [sample_id, label_space.class_names[pred.class_index]]
                + [_fmt(s) for s in pred.scores]
            )
        )
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def read_predictions(path) -> tuple[str, str, LabelSpace, dict[str, tuple[str, tuple[float, ...]]]]:
    """Parse a predictions file; returns (measure tag, crop mode, label space,
    sample_id -> (class name, scores))."""
    lines = _read_lines(path)
    fields, start = _parse_header(
        lines, PREDICTIONS_MAGIC, path, ["measure", "crops", "classes"]
    )
    label_space = _label_space_from_header(fields["classes"], path)
    c = label_space.class_count
    measure = fields["measure"][0] if fields["measure"] else ""
    crops = fields["crops"][0] if fields["crops"] else ""
    preds: dict[str, tuple[str, tuple[float, ...]]] = {}
    for lineno in range(start, len(lines)):
        line = lines[lineno]
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 + c:
            raise FormatError(
                f"expected {2 + c} fields, got {len(parts)}", path=path, line=lineno + 1
            )
        if parts[1] not in label_space.class_names:
            raise FormatError(
                f"unknown class name {parts[1]!r}", path=path, line=lineno + 1
            )
        if parts[0] in preds:
            raise FormatError(
                f"duplicate prediction for sample {parts[0]!r}",
                path=path,
                line=lineno + 1,
            )
        try:
            scores = tuple(float(s) for s in parts[2:])
        except ValueError as exc:
            raise FormatError(
                f"bad score value: {exc}", path=path, line=lineno + 1
            ) from None
        preds[parts[0]] = (parts[1], scores)
    return measure, crops, label_space, preds


def write_report(report: EvaluationReport, path) -> None:
    Path(path).write_text(
        json.dumps(report.as_dict(), indent=2) + "\n", encoding="utf-8"
    )


def write_crosstab(tab: FusionCrossTab, path) -> None:
    Path(path).write_text(
        json.dumps(tab.as_dict(), indent=2) + "\n", encoding="utf-8"
    )
