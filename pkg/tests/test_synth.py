import dataclasses
import re

import numpy as np
import pytest

from dtfusion import (
    SynthConfig,
    ValidationError,
    generate,
    validate_decision_vector,
    write_dump,
)
from dtfusion.synth import draw_error_events

SMALL = SynthConfig(
    class_count=5,
    model_count=2,
    samples_per_class=40,
    per_model_accuracy=(0.85, 0.9),
    confusion_concentration=6.0,
    error_overlap=0.4,
    seed=7,
)


def _top1_hits(dump, labels):
    """Per-model share of samples whose argmax row equals the true class."""
    k = dump.ensemble.model_count
    hits = np.zeros(k)
    for sid, group in dump.groups.items():
        truth = dump.label_space.index_of(labels[sid])
        profile = group.profiles[0]
        for m in range(k):
            hits[m] += int(np.argmax(profile[m])) == truth
    return hits / len(dump.groups)


class TestConfigValidation:
    def test_default_is_valid(self):
        cfg = SynthConfig()
        assert cfg.class_count == 11
        assert cfg.per_model_accuracy == (0.90, 0.93)
        assert cfg.seed == 42

    @pytest.mark.parametrize(
        "field,value,fragment",
        [
            ("class_count", 1, "class_count"),
            ("model_count", 0, "model_count"),
            ("samples_per_class", 0, "samples_per_class"),
            ("per_model_accuracy", (1.0, 0.9), "per_model_accuracy[0]"),
            ("per_model_accuracy", (0.0, 0.9), "per_model_accuracy[0]"),
            ("per_model_accuracy", (0.9,), "entries"),
            ("confusion_concentration", 0.0, "confusion_concentration"),
            ("error_overlap", 1.5, "error_overlap"),
            ("seed", -1, "seed"),
        ],
    )
    def test_bad_fields_named(self, field, value, fragment):
        with pytest.raises(ValidationError, match=re.escape(fragment)):
            dataclasses.replace(SynthConfig(), **{field: value})

    def test_multiple_problems_all_named(self):
        with pytest.raises(ValidationError) as err:
            SynthConfig(samples_per_class=0, error_overlap=2.0)
        message = str(err.value)
        assert "samples_per_class" in message and "error_overlap" in message


class TestGeneration:
    def test_deterministic_byte_identical(self, tmp_path):
        a, b = generate(SMALL), generate(SMALL)
        pa, pb = tmp_path / "a.tsv", tmp_path / "b.tsv"
        write_dump(a.train, pa)
        write_dump(b.train, pb)
        assert pa.read_bytes() == pb.read_bytes()
        pa2, pb2 = tmp_path / "a2.tsv", tmp_path / "b2.tsv"
        write_dump(a.test, pa2)
        write_dump(b.test, pb2)
        assert pa2.read_bytes() == pb2.read_bytes()

    def test_train_test_disjoint(self):
        data = generate(SMALL)
        assert not set(data.train.groups) & set(data.test.groups)

    def test_every_vector_is_valid(self):
        data = generate(SMALL)
        for dump in (data.train, data.test):
            for group in dump.groups.values():
                for profile in group.profiles:
                    for row in profile:
                        validate_decision_vector(row, dump.label_space.class_count)

    def test_labels_cover_all_samples(self):
        data = generate(SMALL)
        assert set(data.train_labels) == set(data.train.groups)
        assert set(data.test_labels) == set(data.test.groups)
        per_class = SMALL.samples_per_class
        counts = {}
        for name in data.train_labels.values():
            counts[name] = counts.get(name, 0) + 1
        assert all(n == per_class for n in counts.values())

    def test_marginal_top1_accuracy_within_two_points(self):
        cfg = SynthConfig(
            class_count=5,
            model_count=2,
            samples_per_class=2000,  # 10000 samples
            per_model_accuracy=(0.8, 0.93),
            confusion_concentration=8.0,
            error_overlap=0.3,
            seed=11,
        )
        data = generate(cfg)
        rates = _top1_hits(data.test, data.test_labels)
        for measured, nominal in zip(rates, cfg.per_model_accuracy):
            assert abs(measured - nominal) <= 0.02

    def test_near_perfect_accuracy(self):
        cfg = SynthConfig(
            class_count=2,
            model_count=1,
            samples_per_class=5000,
            per_model_accuracy=(0.999,),
            confusion_concentration=5.0,
            error_overlap=0.0,
            seed=13,
        )
        data = generate(cfg)
        rates = _top1_hits(data.test, data.test_labels)
        assert abs(rates[0] - 0.999) <= 0.02

    def test_full_overlap_equal_accuracy_same_error_sets(self):
        cfg = SynthConfig(
            class_count=4,
            model_count=2,
            samples_per_class=300,
            per_model_accuracy=(0.8, 0.8),
            confusion_concentration=6.0,
            error_overlap=1.0,
            seed=17,
        )
        data = generate(cfg)
        wrong_sets = [set(), set()]
        for sid, group in data.test.groups.items():
            truth = data.test.label_space.index_of(data.test_labels[sid])
            for m in range(2):
                if int(np.argmax(group.profiles[0][m])) != truth:
                    wrong_sets[m].add(sid)
        assert wrong_sets[0] == wrong_sets[1]
        assert wrong_sets[0]  # nonempty at 20% error

    def test_lower_overlap_weakly_reduces_joint_errors(self):
        joint_counts = []
        for overlap in (1.0, 0.6, 0.3, 0.0):
            cfg = SynthConfig(
                class_count=5,
                model_count=2,
                samples_per_class=2000,
                per_model_accuracy=(0.9, 0.93),
                confusion_concentration=8.0,
                error_overlap=overlap,
                seed=42,
            )
            rng = np.random.default_rng([cfg.seed, 2, 0])
            errs = draw_error_events(cfg, 10000, rng)
            joint_counts.append(int(np.all(errs, axis=1).sum()))
        assert joint_counts == sorted(joint_counts, reverse=True)
        assert joint_counts[0] > joint_counts[-1]
