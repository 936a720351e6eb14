import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtfusion import (
    EmptyClassError,
    EnsembleSpec,
    LabelSpace,
    ShapeError,
    ValidationError,
    build_profile,
    fit_templates,
    softmax,
    validate_decision_vector,
)
from oracles import random_row_stochastic, two_pass_mean_templates

# frozen from a 60-digit arbitrary-precision evaluation of exp(w)/sum(exp)
SOFTMAX_123 = [0.09003057317038046, 0.24472847105479764, 0.6652409557748219]


class TestSoftmax:
    def test_symmetry_two_zeros(self):
        assert softmax([0.0, 0.0]).tolist() == [0.5, 0.5]

    @pytest.mark.parametrize("a", [-7.5, 0.0, 3.25, 1e4])
    def test_constant_input_is_uniform(self, a):
        out = softmax([a, a, a])
        assert np.allclose(out, [1 / 3] * 3, atol=1e-15)

    def test_against_frozen_high_precision_values(self):
        out = softmax([1.0, 2.0, 3.0])
        assert np.allclose(out, SOFTMAX_123, atol=1e-12, rtol=0.0)

    def test_nonfinite_is_rejected_with_index(self):
        with pytest.raises(ValidationError, match="index 1"):
            softmax([0.0, float("nan"), 1.0])
        with pytest.raises(ValidationError, match="index 2"):
            softmax([0.0, 1.0, float("inf")])

    def test_overflow_safe(self):
        out = softmax([1000.0, 1000.0])
        assert out.tolist() == [0.5, 0.5]

    @given(
        logits=st.lists(
            st.floats(min_value=-200, max_value=200), min_size=2, max_size=8
        ),
        shift=st.floats(min_value=-500, max_value=500),
    )
    @settings(max_examples=200, deadline=None)
    def test_shift_invariance(self, logits, shift):
        base = softmax(logits)
        shifted = softmax([x + shift for x in logits])
        assert np.max(np.abs(base - shifted)) <= 1e-12

    @given(
        logits=st.lists(
            st.floats(min_value=-500, max_value=500), min_size=2, max_size=8
        )
    )
    @settings(max_examples=200, deadline=None)
    def test_output_is_valid_decision_vector(self, logits):
        out = softmax(logits)
        validate_decision_vector(out, len(logits))


class TestDescriptors:
    def test_label_space_needs_two_classes(self):
        with pytest.raises(ValidationError):
            LabelSpace(("only",))

    def test_label_space_rejects_duplicates_and_empties(self):
        with pytest.raises(ValidationError):
            LabelSpace(("a", "a"))
        with pytest.raises(ValidationError):
            LabelSpace(("a", ""))

    def test_label_space_lookup(self):
        ls = LabelSpace(("cat", "dog", "eel"))
        assert ls.class_count == 3
        assert ls.index_of("dog") == 1
        with pytest.raises(ValidationError):
            ls.index_of("fox")
        with pytest.raises(ValidationError):
            ls.check_label(3)
        with pytest.raises(ValidationError):
            ls.check_label(-1)

    def test_ensemble_spec(self):
        es = EnsembleSpec(("m0",))
        assert es.model_count == 1
        with pytest.raises(ValidationError):
            EnsembleSpec(())
        with pytest.raises(ValidationError):
            EnsembleSpec(("m", "m"))


class TestBuildProfile:
    def test_single_row(self):
        assert build_profile([[1.0, 0.0]]).tolist() == [[1.0, 0.0]]

    def test_row_order_preserved(self):
        profile = build_profile([[0.7, 0.3], [0.5, 0.5]])
        assert profile.tolist() == [[0.7, 0.3], [0.5, 0.5]]

    def test_off_sum_row_rejected(self):
        with pytest.raises(ValidationError, match="sum"):
            build_profile([[0.7, 0.3], [0.3, 0.5]])

    def test_renormalize_opt_in(self):
        profile = build_profile([[0.4, 0.4]], renormalize=True)
        assert profile.tolist() == [[0.5, 0.5]]

    def test_wrong_model_count(self):
        with pytest.raises(ShapeError):
            build_profile([[1.0, 0.0]], model_count=2)

    def test_inconsistent_row_lengths(self):
        with pytest.raises(ShapeError):
            build_profile([[1.0, 0.0], [1.0, 0.0, 0.0]])

    def test_out_of_range_entry(self):
        with pytest.raises(ValidationError, match="outside"):
            build_profile([[1.2, -0.2]])

    def test_result_is_immutable(self):
        profile = build_profile([[1.0, 0.0]])
        with pytest.raises(ValueError):
            profile[0, 0] = 0.5


def _space(c):
    return LabelSpace(tuple(f"c{i}" for i in range(c)))


def _ensemble(k):
    return EnsembleSpec(tuple(f"m{i}" for i in range(k)))


class TestFitTemplates:
    def test_single_profile_per_class_is_identity(self):
        rng = np.random.default_rng(7)
        profiles = [random_row_stochastic(rng, 2, 3) for _ in range(3)]
        fitted = fit_templates(profiles, [0, 1, 2], _space(3), _ensemble(2))
        for c in range(3):
            assert np.array_equal(fitted.templates[c], profiles[c])
        assert fitted.support_counts == (1, 1, 1)

    def test_symmetric_average(self):
        profiles = [
            np.array([[1.0, 0.0], [0.0, 1.0]]),
            np.array([[0.0, 1.0], [1.0, 0.0]]),
            np.array([[1.0, 0.0], [1.0, 0.0]]),
        ]
        fitted = fit_templates(profiles, [0, 0, 1], _space(2), _ensemble(2))
        assert fitted.templates[0].tolist() == [[0.5, 0.5], [0.5, 0.5]]
        assert fitted.support_counts == (2, 1)

    def test_against_two_pass_mean_oracle(self):
        rng = np.random.default_rng(11)
        profiles = [random_row_stochastic(rng, 3, 5) for _ in range(200)]
        labels = rng.integers(0, 5, size=200).tolist()
        while len(set(labels)) < 5:  # ensure all classes present
            labels = rng.integers(0, 5, size=200).tolist()
        fitted = fit_templates(profiles, labels, _space(5), _ensemble(3))
        oracle = two_pass_mean_templates(profiles, labels, 5)
        assert np.max(np.abs(fitted.templates - oracle)) <= 1e-12

    def test_sample_order_invariance(self):
        rng = np.random.default_rng(13)
        profiles = [random_row_stochastic(rng, 2, 4) for _ in range(120)]
        labels = (list(range(4)) * 30)[:120]
        fitted = fit_templates(profiles, labels, _space(4), _ensemble(2))
        order = rng.permutation(120)
        shuffled = fit_templates(
            [profiles[i] for i in order],
            [labels[i] for i in order],
            _space(4),
            _ensemble(2),
        )
        assert np.max(np.abs(fitted.templates - shuffled.templates)) <= 1e-12

    def test_support_counts_sum_to_n(self):
        rng = np.random.default_rng(17)
        profiles = [random_row_stochastic(rng, 1, 3) for _ in range(50)]
        labels = ([0, 1, 2] * 17)[:50]
        fitted = fit_templates(profiles, labels, _space(3), _ensemble(1))
        assert sum(fitted.support_counts) == 50

    def test_templates_row_stochastic(self):
        rng = np.random.default_rng(19)
        profiles = [random_row_stochastic(rng, 2, 6) for _ in range(90)]
        labels = (list(range(6)) * 15)[:90]
        fitted = fit_templates(profiles, labels, _space(6), _ensemble(2))
        sums = fitted.templates.sum(axis=2)
        assert np.max(np.abs(sums - 1.0)) <= 1e-9

    def test_empty_class_names_all_missing(self):
        profiles = [np.array([[1.0, 0.0, 0.0]])]
        with pytest.raises(EmptyClassError) as err:
            fit_templates(profiles, [0], _space(3), _ensemble(1))
        assert err.value.class_names == ["c1", "c2"]

    def test_shape_mismatch_reports_sample(self):
        profiles = [np.ones((1, 2)) / 2, np.ones((2, 2)) / 2]
        with pytest.raises(ShapeError, match="profile 1"):
            fit_templates(profiles, [0, 1], _space(2), _ensemble(1))

    def test_zero_samples(self):
        with pytest.raises(ValidationError):
            fit_templates([], [], _space(2), _ensemble(1))

    def test_label_count_mismatch(self):
        with pytest.raises(ShapeError):
            fit_templates([np.ones((1, 2)) / 2], [0, 1], _space(2), _ensemble(1))
