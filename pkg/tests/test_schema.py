"""Schema, dataset validation, and normalized-distribution contracts."""

import math

import pytest
from hypothesis import given, strategies as st

from bayeskit import (
    FeatureSchema,
    FeatureSpec,
    FiniteDistribution,
    LabelSpace,
    LabeledDataset,
    ValidationError,
    check_instance,
    validate_dataset,
)


class TestFeatureSpec:
    def test_boolean_is_two_ary_categorical(self):
        spec = FeatureSpec.boolean("flag")
        assert spec.is_categorical
        assert spec.values == ("false", "true")
        assert spec.arity == 2

    def test_categorical_needs_two_values(self):
        with pytest.raises(ValidationError):
            FeatureSpec.categorical("c", ("only",))

    def test_duplicate_values_rejected(self):
        with pytest.raises(ValidationError):
            FeatureSpec.categorical("c", ("a", "a"))

    def test_real_has_no_values(self):
        spec = FeatureSpec.real("x")
        assert not spec.is_categorical
        with pytest.raises(ValidationError):
            _ = spec.arity

    def test_empty_name_rejected(self):
        with pytest.raises(ValidationError):
            FeatureSpec.real("")

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValidationError):
            FeatureSpec("x", "fuzzy")


class TestSchemaAndLabels:
    def test_duplicate_feature_names_rejected(self):
        with pytest.raises(ValidationError):
            FeatureSchema((FeatureSpec.real("x"), FeatureSpec.boolean("x")))

    def test_empty_schema_rejected(self):
        with pytest.raises(ValidationError):
            FeatureSchema(())

    def test_order_is_declaration_order(self):
        schema = FeatureSchema((FeatureSpec.boolean("a"), FeatureSpec.real("b")))
        assert schema.names == ("a", "b")
        assert not schema.all_categorical

    def test_label_space_needs_two_distinct(self):
        with pytest.raises(ValidationError):
            LabelSpace(("only",))
        with pytest.raises(ValidationError):
            LabelSpace(("a", "a"))

    def test_label_index(self):
        labels = LabelSpace(("GREEN", "RED"))
        assert labels.index("RED") == 1
        with pytest.raises(ValidationError):
            labels.index("BLUE")


def _schema():
    return FeatureSchema((FeatureSpec.boolean("b"), FeatureSpec.real("x")))


def _labels():
    return LabelSpace(("G", "R"))


class TestValidateDataset:
    def test_conforming_rows_ok(self):
        ds = LabeledDataset(
            _schema(), _labels(), (((0, 1.5), 0), ((1, -2.0), 1), ((0, 0.0), 0))
        )
        report = validate_dataset(ds)
        assert report.ok
        assert report.violations == ()

    def test_out_of_range_categorical_index_flagged(self):
        ds = LabeledDataset(_schema(), _labels(), (((0, 1.0), 0), ((2, 1.0), 1)))
        report = validate_dataset(ds)
        assert not report.ok
        assert report.violations[0].row == 1
        assert "out of range" in report.violations[0].reason

    def test_nan_real_value_names_feature_and_row(self):
        ds = LabeledDataset(_schema(), _labels(), (((0, float("nan")), 0),))
        report = validate_dataset(ds)
        assert not report.ok
        assert report.violations[0].row == 0
        assert "'x'" in report.violations[0].reason

    def test_label_out_of_range_flagged(self):
        ds = LabeledDataset(_schema(), _labels(), (((0, 1.0), 5),))
        report = validate_dataset(ds)
        assert not report.ok
        assert "label index" in report.violations[0].reason

    def test_wrong_length_instance_flagged(self):
        ds = LabeledDataset(_schema(), _labels(), (((0,), 0),))
        assert not validate_dataset(ds).ok

    def test_bool_is_not_a_categorical_index(self):
        problems = check_instance(_schema(), (True, 1.0))
        assert problems and "integer index" in problems[0]

    def test_empty_dataset_has_no_violations(self):
        assert validate_dataset(LabeledDataset(_schema(), _labels(), ())).ok


class TestFiniteDistribution:
    def test_exact_input_kept_bit_for_bit(self):
        dist = FiniteDistribution((2 / 3, 1 / 3))
        assert dist.probabilities == (2 / 3, 1 / 3)

    def test_small_drift_renormalized(self):
        dist = FiniteDistribution((0.5, 0.5 + 3e-10))
        assert math.fsum(dist) == pytest.approx(1.0, abs=1e-12)

    def test_large_drift_rejected(self):
        with pytest.raises(ValidationError):
            FiniteDistribution((0.25, 0.25))

    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            FiniteDistribution((-0.1, 1.1))

    def test_nan_rejected(self):
        with pytest.raises(ValidationError):
            FiniteDistribution((float("nan"), 1.0))

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            FiniteDistribution(())

    def test_uniform(self):
        dist = FiniteDistribution.uniform(4)
        assert all(p == 0.25 for p in dist)

    @given(
        st.lists(st.floats(min_value=1e-6, max_value=1e6), min_size=1, max_size=12),
        st.floats(min_value=-9e-10, max_value=9e-10),
    )
    def test_normalized_then_nudged_inputs_always_pass(self, weights, nudge):
        total = math.fsum(weights)
        probs = [w / total for w in weights]
        probs[0] = max(probs[0] + nudge, 0.0)
        dist = FiniteDistribution(tuple(probs))
        # the invariant re-checks clean after construction
        assert abs(math.fsum(dist) - 1.0) <= 1e-12
        assert all(p >= 0 for p in dist)
