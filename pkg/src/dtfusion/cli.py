"""Command-line entry point.

Subcommands cover the full pipeline: ``simulate`` (synthetic dumps), ``fit``
(templates from a training dump), ``predict``, ``evaluate`` and ``crosstab``.
Every successful run writes exactly one JSON manifest next to its outputs
recording the command, resolved parameters, input digests, tool version and
wall-clock duration; outputs themselves are byte-stable for identical inputs
and flags.

Exit codes: 0 success, 2 usage, 3 file format errors, 4 validation errors,
5 empty-class fit errors, 9 unexpected internal errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .core import fit_templates
from .dataio import (
    DumpData,
    align_labels,
    read_dump,
    read_labels,
    read_templates,
    write_crosstab,
    write_dump,
    write_labels,
    write_predictions,
    write_report,
    write_templates,
)
from .errors import (
    DTFusionError,
    EmptyClassError,
    FormatError,
    ValidationError,
)
from .inference import majority_vote_argmax, predict, vote_crops
from .metrics import confusion, crosstab, report
from .similarity import Measure
from .synth import SynthConfig, generate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_EMPTY_CLASS = 5
EXIT_INTERNAL = 9

WORKERS_ENV = "DTFUSION_WORKERS"


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(
    manifest_path, command: str, params: dict, inputs: list, started: float
) -> None:
    manifest = {
        "command": command,
        "parameters": params,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "tool_version": __version__,
        "duration_seconds": time.monotonic() - started,
        "finished_at": datetime.now(timezone.utc).isoformat(),
    }
    Path(manifest_path).write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )


def _parse_measure(name: str) -> Measure:
    try:
        return Measure.parse(name)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def _crop_mode_string(dump: DumpData, crops: str) -> str:
    if crops == "first":
        return "single"
    sizes = [len(g.profiles) for g in dump.groups.values()]
    most_common = max(set(sizes), key=lambda s: (sizes.count(s), -s))
    return f"multi({most_common})"


def _fused_predictions(
    dump: DumpData,
    templates,
    measure: Measure,
    crops: str,
    workers: int | None = None,
) -> dict:
    """sample_id -> Prediction under the requested crop handling."""
    if crops == "first":
        def one(group):
            return predict(group.profile_for_crop(0), templates, measure)
    else:
        def one(group):
            return vote_crops(group, templates, measure)

    groups = list(dump.groups.values())
    if workers is not None and workers > 1 and len(groups) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, groups))
    else:
        results = [one(g) for g in groups]
    return dict(zip(dump.groups, results))


def _base_predictions(dump: DumpData, model_index: int, crops: str) -> list[int]:
    """One model's own argmax predictions, crop-handled like the fused run."""
    out = []
    for group in dump.groups.values():
        if crops == "first":
            out.append(int(np.argmax(group.profile_for_crop(0)[model_index])))
        else:
            out.append(
                majority_vote_argmax([p[model_index] for p in group.profiles])
            )
    return out


def _check_compatible(dump: DumpData, templates) -> None:
    if dump.ensemble != templates.ensemble or dump.label_space != templates.label_space:
        if (
            dump.ensemble.model_count != templates.model_count
            or dump.label_space.class_count != templates.class_count
        ):
            raise ValidationError(
                f"dump (K={dump.ensemble.model_count}, "
                f"C={dump.label_space.class_count}) does not match templates "
                f"(K={templates.model_count}, C={templates.class_count})"
            )
        raise ValidationError(
            "dump and templates disagree on model or class names"
        )


def _format_pct(value) -> str:
    return "n/a" if value is None else f"{100.0 * value:.2f}%"


def _render_report_table(rep) -> str:
    lines = [
        f"measure {rep.measure}, crops {rep.crop_mode}, samples {rep.sample_count}",
        f"overall accuracy {rep.overall_accuracy:.4f}   "
        f"error rate {rep.error_rate:.4f}",
        "",
        f"{'class':<24} {'support':>8} {'precision':>10} {'recall':>10} {'f1':>10}",
    ]
    for cm in rep.per_class:
        lines.append(
            f"{cm.name:<24} {cm.support:>8} {_format_pct(cm.precision):>10} "
            f"{_format_pct(cm.recall):>10} {_format_pct(cm.f1):>10}"
        )
    return "\n".join(lines)


def _render_crosstab_table(tab) -> str:
    names = tab.model_names or ("model 1", "model 2")
    headers = {
        "both_wrong": "both wrong",
        "model1_wrong": f"{names[0]} wrong",
        "model2_wrong": f"{names[1]} wrong",
        "both_fine": "both fine",
    }
    cols = [headers[s.key] for s in tab.strata]
    width = max(16, max(len(c) for c in cols) + 2)
    def row(label, values):
        return f"{label:<18}" + "".join(f"{v:>{width}}" for v in values)

    def pct(v):
        return "n/a" if v is None else f"{v:.2f}%"

    lines = [
        f"fusion outcome by base-model correctness (measure {tab.measure})",
        row("", cols),
        row("well-classified", [pct(s.pct_correct) for s in tab.strata]),
        row("misclassified", [pct(s.pct_wrong) for s in tab.strata]),
        row("samples", [str(s.count) for s in tab.strata]),
    ]
    return "\n".join(lines)


def cmd_fit(args) -> int:
    started = time.monotonic()
    dump = read_dump(args.preds, renormalize=args.renormalize)
    labels = read_labels(args.labels)
    label_indices = align_labels(dump, labels)
    profiles = []
    for group in dump.groups.values():
        for profile in group.profiles:
            profiles.append(profile)
    # one label per crop profile, repeated in group order
    per_profile_labels = []
    for group, label in zip(dump.groups.values(), label_indices):
        per_profile_labels.extend([label] * len(group.profiles))
    templates = fit_templates(
        profiles, per_profile_labels, dump.label_space, dump.ensemble
    )
    write_templates(templates, args.out)
    _write_manifest(
        str(args.out) + ".manifest.json",
        "fit",
        {
            "preds": str(args.preds),
            "labels": str(args.labels),
            "out": str(args.out),
            "renormalize": args.renormalize,
        },
        [args.preds, args.labels],
        started,
    )
    print(
        f"fitted {templates.class_count} templates "
        f"(K={templates.model_count}) from {len(profiles)} profiles -> {args.out}"
    )
    return EXIT_OK


def cmd_predict(args) -> int:
    started = time.monotonic()
    measure = _parse_measure(args.measure)
    dump = read_dump(args.preds, renormalize=args.renormalize)
    templates = read_templates(args.templates)
    _check_compatible(dump, templates)
    preds = _fused_predictions(dump, templates, measure, args.crops, args.workers)
    crop_mode = _crop_mode_string(dump, args.crops)
    write_predictions(preds, dump.label_space, measure, crop_mode, args.out)
    _write_manifest(
        str(args.out) + ".manifest.json",
        "predict",
        {
            "preds": str(args.preds),
            "templates": str(args.templates),
            "measure": measure.value,
            "crops": args.crops,
            "out": str(args.out),
            "renormalize": args.renormalize,
        },
        [args.preds, args.templates],
        started,
    )
    print(f"predicted {len(preds)} samples ({measure.value}, crops={args.crops}) -> {args.out}")
    return EXIT_OK


def _report_path_for_measure(base, tag: str):
    base = Path(base)
    return base.with_name(
        base.stem + f".{tag}" + (base.suffix or ".json")
    )


def cmd_evaluate(args) -> int:
    started = time.monotonic()
    if args.measure.strip().lower() == "all":
        measures = list(Measure)
    else:
        measures = [_parse_measure(args.measure)]
    dump = read_dump(args.preds, renormalize=args.renormalize)
    if not dump.groups:
        raise ValidationError("empty test dump")
    labels = read_labels(args.labels)
    truth = align_labels(dump, labels)
    templates = read_templates(args.templates)
    _check_compatible(dump, templates)
    crop_mode = _crop_mode_string(dump, args.crops)

    written = []
    for measure in measures:
        preds = _fused_predictions(dump, templates, measure, args.crops, args.workers)
        pred_indices = [preds[s].class_index for s in dump.groups]
        cm = confusion(pred_indices, truth, dump.label_space.class_count)
        rep = report(
            cm,
            class_names=dump.label_space.class_names,
            measure=measure.value,
            crop_mode=crop_mode,
        )
        path = (
            _report_path_for_measure(args.report, measure.value)
            if len(measures) > 1
            else Path(args.report)
        )
        write_report(rep, path)
        written.append(str(path))
        print(_render_report_table(rep))
        print()
    _write_manifest(
        str(args.report) + ".manifest.json",
        "evaluate",
        {
            "preds": str(args.preds),
            "labels": str(args.labels),
            "templates": str(args.templates),
            "measure": args.measure,
            "crops": args.crops,
            "report": str(args.report),
            "renormalize": args.renormalize,
            "written": written,
        },
        [args.preds, args.labels, args.templates],
        started,
    )
    return EXIT_OK


def cmd_crosstab(args) -> int:
    started = time.monotonic()
    measure = _parse_measure(args.measure)
    dump = read_dump(args.preds, renormalize=args.renormalize)
    if dump.ensemble.model_count != 2:
        raise ValidationError(
            f"cross tabulation supports exactly 2 base models, the dump has "
            f"{dump.ensemble.model_count}; use per-model reports instead"
        )
    labels = read_labels(args.labels)
    truth = align_labels(dump, labels)
    templates = read_templates(args.templates)
    _check_compatible(dump, templates)
    preds = _fused_predictions(dump, templates, measure, args.crops)
    fused = [preds[s].class_index for s in dump.groups]
    base = [_base_predictions(dump, k, args.crops) for k in range(2)]
    tab = crosstab(
        fused,
        base,
        truth,
        model_names=tuple(dump.ensemble.model_names),
        measure=measure.value,
    )
    write_crosstab(tab, args.out)
    _write_manifest(
        str(args.out) + ".manifest.json",
        "crosstab",
        {
            "preds": str(args.preds),
            "labels": str(args.labels),
            "templates": str(args.templates),
            "measure": measure.value,
            "crops": args.crops,
            "out": str(args.out),
            "renormalize": args.renormalize,
        },
        [args.preds, args.labels, args.templates],
        started,
    )
    print(_render_crosstab_table(tab))
    return EXIT_OK


_INLINE_SIMULATE_FLAGS = (
    "classes",
    "models",
    "samples_per_class",
    "accuracies",
    "concentration",
    "overlap",
    "seed",
)


def _config_from_args(parser: argparse.ArgumentParser, args) -> SynthConfig:
    inline_given = [
        flag
        for flag in _INLINE_SIMULATE_FLAGS
        if getattr(args, flag) is not None
    ]
    if args.config is not None:
        if inline_given:
            parser.error(
                "--config cannot be combined with inline config flags: "
                + ", ".join("--" + f.replace("_", "-") for f in inline_given)
            )
        try:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise FormatError(f"cannot read config: {exc}", path=args.config) from None
        except json.JSONDecodeError as exc:
            raise FormatError(f"bad JSON: {exc}", path=args.config) from None
        if not isinstance(raw, dict):
            raise FormatError("config must be a JSON object", path=args.config)
        valid = set(SynthConfig.__dataclass_fields__)
        unknown = sorted(set(raw) - valid)
        if unknown:
            raise ValidationError(f"unknown config field(s): {', '.join(unknown)}")
        if "per_model_accuracy" in raw:
            raw["per_model_accuracy"] = tuple(raw["per_model_accuracy"])
        return SynthConfig(**raw)
    overrides = {}
    if args.classes is not None:
        overrides["class_count"] = args.classes
    if args.models is not None:
        overrides["model_count"] = args.models
    if args.samples_per_class is not None:
        overrides["samples_per_class"] = args.samples_per_class
    if args.accuracies is not None:
        try:
            overrides["per_model_accuracy"] = tuple(
                float(a) for a in args.accuracies.split(",")
            )
        except ValueError:
            raise ValidationError(
                f"--accuracies must be a comma-separated list of reals, "
                f"got {args.accuracies!r}"
            ) from None
    if args.concentration is not None:
        overrides["confusion_concentration"] = args.concentration
    if args.overlap is not None:
        overrides["error_overlap"] = args.overlap
    if args.seed is not None:
        overrides["seed"] = args.seed
    return SynthConfig(**overrides)


def cmd_simulate(args, parser) -> int:
    started = time.monotonic()
    cfg = _config_from_args(parser, args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    data = generate(cfg)
    paths = {
        "train_preds": out_dir / "train.preds.tsv",
        "train_labels": out_dir / "train.labels.tsv",
        "test_preds": out_dir / "test.preds.tsv",
        "test_labels": out_dir / "test.labels.tsv",
    }
    write_dump(data.train, paths["train_preds"])
    write_labels(data.train_labels, paths["train_labels"])
    write_dump(data.test, paths["test_preds"])
    write_labels(data.test_labels, paths["test_labels"])
    _write_manifest(
        out_dir / "manifest.json",
        "simulate",
        {
            "config": {
                "class_count": cfg.class_count,
                "model_count": cfg.model_count,
                "samples_per_class": cfg.samples_per_class,
                "per_model_accuracy": list(cfg.per_model_accuracy),
                "confusion_concentration": cfg.confusion_concentration,
                "error_overlap": cfg.error_overlap,
                "seed": cfg.seed,
            },
            "out_dir": str(out_dir),
        },
        [args.config] if args.config is not None else [],
        started,
    )
    n_train = len(data.train.groups)
    n_test = len(data.test.groups)
    print(
        f"wrote {n_train} train and {n_test} test samples "
        f"(C={cfg.class_count}, K={cfg.model_count}, seed={cfg.seed}) -> {out_dir}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtfusion",
        description="Decision-template fusion of probabilistic classifier ensembles.",
    )
    parser.add_argument("--version", action="version", version=f"dtfusion {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    try:
        default_workers = int(os.environ[WORKERS_ENV])
    except (KeyError, ValueError):
        default_workers = None

    p = sub.add_parser("fit", help="fit decision templates from a training dump")
    p.add_argument("--preds", required=True, help="training prediction dump")
    p.add_argument("--labels", required=True, help="label sidecar for the dump")
    p.add_argument("--out", required=True, help="output template file")
    p.add_argument(
        "--renormalize",
        action="store_true",
        help="divide off-sum probability rows by their sum instead of rejecting",
    )

    p = sub.add_parser("predict", help="predict classes for a dump")
    p.add_argument("--preds", required=True)
    p.add_argument("--templates", required=True)
    p.add_argument("--measure", required=True, help="S1, S2, I1, I2, C or N")
    p.add_argument(
        "--crops",
        choices=["vote", "first"],
        default="vote",
        help="vote: majority over all crops; first: crop 0 only",
    )
    p.add_argument("--out", required=True)
    p.add_argument("--renormalize", action="store_true")
    p.add_argument("--workers", type=int, default=default_workers)

    p = sub.add_parser("evaluate", help="score a labeled dump and write a report")
    p.add_argument("--preds", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--templates", required=True)
    p.add_argument("--measure", required=True, help="a measure tag, or 'all'")
    p.add_argument("--crops", choices=["vote", "first"], default="vote")
    p.add_argument("--report", required=True)
    p.add_argument("--renormalize", action="store_true")
    p.add_argument("--workers", type=int, default=default_workers)

    p = sub.add_parser(
        "crosstab", help="fusion outcome stratified by base-model correctness"
    )
    p.add_argument("--preds", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--templates", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("--crops", choices=["vote", "first"], default="vote")
    p.add_argument("--out", required=True)
    p.add_argument("--renormalize", action="store_true")

    p = sub.add_parser("simulate", help="generate synthetic train/test dumps")
    p.add_argument("--config", help="JSON file with generator parameters")
    p.add_argument("--classes", type=int)
    p.add_argument("--models", type=int)
    p.add_argument("--samples-per-class", dest="samples_per_class", type=int)
    p.add_argument("--accuracies", help="comma-separated per-model accuracies")
    p.add_argument("--concentration", type=float)
    p.add_argument("--overlap", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fit":
            return cmd_fit(args)
        if args.command == "predict":
            return cmd_predict(args)
        if args.command == "evaluate":
            return cmd_evaluate(args)
        if args.command == "crosstab":
            return cmd_crosstab(args)
        if args.command == "simulate":
            return cmd_simulate(args, parser)
        parser.error(f"unknown command {args.command!r}")
    except FormatError as exc:
        print(f"dtfusion: format error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EmptyClassError as exc:
        print(f"dtfusion: fit error: {exc}", file=sys.stderr)
        return EXIT_EMPTY_CLASS
    except ValidationError as exc:
        print(f"dtfusion: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except DTFusionError as exc:
        print(f"dtfusion: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        print(f"dtfusion: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
