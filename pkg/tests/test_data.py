"""Dataset validation, class bookkeeping, and random-stream determinism."""

import numpy as np
import pytest

from mmv import RngStream, class_proportions, validate_dataset
from mmv.data import DirectionBasis
from mmv.errors import EmptyClass, EmptyInput, NonFiniteValue, SingleClass


class TestValidateDataset:
    def test_relabels_in_first_appearance_order(self):
        data = validate_dataset(np.arange(8.0).reshape(4, 2), ["a", "a", "b", "b"])
        assert data.n_classes == 2
        assert data.class_labels == ("a", "b")
        np.testing.assert_array_equal(data.labels, [0, 0, 1, 1])
        np.testing.assert_array_equal(data.class_counts, [2, 2])

    def test_single_class_rejected(self):
        with pytest.raises(SingleClass):
            validate_dataset(np.ones((3, 2)), ["a", "a", "a"])

    def test_nan_rejected(self):
        x = np.ones((3, 2))
        x[1, 1] = np.nan
        with pytest.raises(NonFiniteValue):
            validate_dataset(x, [0, 1, 0])

    def test_inf_rejected(self):
        x = np.ones((3, 2))
        x[0, 0] = np.inf
        with pytest.raises(NonFiniteValue):
            validate_dataset(x, [0, 1, 0])

    def test_too_few_rows(self):
        with pytest.raises(EmptyInput):
            validate_dataset(np.ones((1, 2)), [0])

    def test_idempotent(self):
        first = validate_dataset(np.arange(8.0).reshape(4, 2), [3, 1, 3, 2])
        second = validate_dataset(first.features, first.labels)
        np.testing.assert_array_equal(first.labels, second.labels)
        np.testing.assert_array_equal(first.features, second.features)

    def test_subset_keeps_parent_ids(self):
        data = validate_dataset(np.arange(12.0).reshape(6, 2), [0, 1, 1, 0, 1, 0])
        sub = data.subset([3, 4])
        np.testing.assert_array_equal(sub.labels, [0, 1])
        with pytest.raises(EmptyClass):
            data.subset([0, 3, 5])  # drops class 1


class TestClassProportions:
    def test_equal_split(self):
        data = validate_dataset(np.random.default_rng(0).normal(size=(4, 2)), [0, 0, 1, 1])
        np.testing.assert_allclose(class_proportions(data), [0.5, 0.5])

    def test_three_to_one(self):
        data = validate_dataset(np.random.default_rng(0).normal(size=(4, 2)), [0, 0, 0, 1])
        np.testing.assert_allclose(class_proportions(data), [0.75, 0.25])

    def test_colon_style_counts(self):
        labels = ["t"] * 40 + ["n"] * 22
        data = validate_dataset(np.random.default_rng(0).normal(size=(62, 3)), labels)
        np.testing.assert_allclose(class_proportions(data), [40 / 62, 22 / 62])
        assert abs(class_proportions(data).sum() - 1.0) < 1e-12


class TestDirectionBasis:
    def test_rejects_non_unit(self):
        with pytest.raises(ValueError):
            DirectionBasis(np.array([[2.0, 0.0]]), np.array([0.1]))

    def test_rejects_non_orthogonal(self):
        with pytest.raises(ValueError):
            DirectionBasis(
                np.array([[1.0, 0.0], [np.sqrt(0.5), np.sqrt(0.5)]]), np.array([0.1, 0.1])
            )

    def test_rejects_out_of_range_values(self):
        with pytest.raises(ValueError):
            DirectionBasis(np.array([[1.0, 0.0]]), np.array([1.5]))

    def test_transform_projects(self):
        basis = DirectionBasis(np.array([[0.0, 1.0]]), np.array([0.2]))
        out = basis.transform(np.array([[3.0, 4.0], [1.0, -1.0]]))
        np.testing.assert_allclose(out, [[4.0], [-1.0]])


class TestRngStream:
    def test_same_path_same_draws(self):
        a = RngStream(7).child("fit", 3, 1).generator().standard_normal(5)
        b = RngStream(7).child("fit", 3, 1).generator().standard_normal(5)
        np.testing.assert_array_equal(a, b)

    def test_different_paths_differ(self):
        a = RngStream(7).child("fit", 3).generator().standard_normal(5)
        b = RngStream(7).child("fit", 4).generator().standard_normal(5)
        assert not np.allclose(a, b)

    def test_tag_and_index_keying(self):
        a = RngStream(7).child("data", 0).generator().standard_normal(3)
        b = RngStream(7).child("folds", 0).generator().standard_normal(3)
        assert not np.allclose(a, b)

    def test_rejects_negative_path(self):
        with pytest.raises(ValueError):
            RngStream(7).child(-1)
