"""Generator specs, deterministic sampling, and the concentration experiment."""

import numpy as np
import pytest

from bayeskit import (
    ExplicitSpec,
    FactoredSpec,
    FeatureSchema,
    FeatureSpec,
    FiniteDistribution,
    LabelSpace,
    TripleJoint,
    ValidationError,
    bayes_error,
    classify,
    evaluate,
    green_red_dataset,
    is_conditionally_independent,
    mle_concentration_trial,
    naive_model_from_factored,
    factored_from_model,
    posterior,
    sample,
    to_joint,
    train,
    validate_dataset,
)
from helpers import (
    boolean_schema,
    label_space,
    random_factored_spec,
    random_joint,
    worked_factored,
)


def _uniform_factored(n: int) -> FactoredSpec:
    schema = boolean_schema(n)
    labels = label_space(2)
    half = FiniteDistribution((0.5, 0.5))
    return FactoredSpec(schema, labels, half, ((half, half),) * n)


class TestToJoint:
    def test_uniform_spec_expands_to_uniform_joint(self):
        joint = to_joint(_uniform_factored(2))
        assert joint.mass.shape == (4, 2)
        assert np.all(joint.mass == 1 / 8)

    def test_worked_example_cell(self):
        joint = to_joint(worked_factored())
        idx = joint.index_of((1, 1))
        assert joint.mass[idx, 1] == pytest.approx(0.5 * 0.8 * 0.6, abs=1e-15)

    def test_explicit_spec_passes_through(self):
        joint = random_joint(np.random.default_rng(2), 3)
        assert to_joint(ExplicitSpec(joint)) is joint

    def test_mass_sums_to_one(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            spec = random_factored_spec(rng, int(rng.integers(1, 6)), boolean=False)
            assert to_joint(spec).mass.sum() == pytest.approx(1.0, abs=1e-12)

    def test_factored_expansion_is_conditionally_independent(self):
        # any feature pair given the class passes the independence check
        rng = np.random.default_rng(31)
        for _ in range(5):
            n = int(rng.integers(2, 5))
            spec = random_factored_spec(rng, n, boolean=True)
            joint = to_joint(spec)
            for a in range(n):
                for b in range(a + 1, n):
                    mass = np.zeros((2, 2, 2))
                    for instance in joint.instances():
                        for k in range(2):
                            mass[instance[a], instance[b], k] += joint.mass[
                                joint.index_of(instance), k
                            ]
                    triple = TripleJoint((f"f{a}", f"f{b}", "class"), mass)
                    ok, _ = is_conditionally_independent(triple, tol=1e-9)
                    assert ok

    def test_real_features_rejected_in_factored_specs(self):
        schema = FeatureSchema((FeatureSpec.real("x"),))
        half = FiniteDistribution((0.5, 0.5))
        with pytest.raises(ValidationError):
            FactoredSpec(schema, label_space(2), half, ((half, half),))


class TestSample:
    def test_point_mass_spec_repeats_one_row(self):
        schema = FeatureSchema((FeatureSpec.boolean("a"),))
        spec = FactoredSpec(
            schema,
            label_space(2),
            FiniteDistribution((0.0, 1.0)),
            ((FiniteDistribution((1.0, 0.0)), FiniteDistribution((0.0, 1.0))),),
        )
        ds = sample(spec, 25, seed=0)
        assert all(row == ((1,), 1) for row in ds.rows)

    def test_same_seed_same_dataset(self):
        spec = worked_factored()
        assert sample(spec, 500, seed=123).rows == sample(spec, 500, seed=123).rows

    def test_different_seed_differs(self):
        spec = worked_factored()
        assert sample(spec, 500, seed=1).rows != sample(spec, 500, seed=2).rows

    def test_class_frequency_concentrates(self):
        # P(first class) = 2/3; 30000 draws put the frequency within 0.02
        # (about seven binomial standard deviations)
        schema = FeatureSchema((FeatureSpec.boolean("a"),))
        spec = FactoredSpec(
            schema,
            label_space(2),
            FiniteDistribution((2 / 3, 1 / 3)),
            ((FiniteDistribution((0.5, 0.5)),) * 2,),
        )
        ds = sample(spec, 30000, seed=7)
        freq = sum(1 for _, y in ds.rows if y == 0) / len(ds)
        assert abs(freq - 2 / 3) <= 0.02

    def test_cell_frequencies_match_the_joint(self):
        spec = worked_factored()
        joint = to_joint(spec)
        ds = sample(spec, 100_000, seed=11)
        counts = np.zeros_like(joint.mass)
        for instance, k in ds.rows:
            counts[joint.index_of(instance), k] += 1
        assert np.max(np.abs(counts / len(ds) - joint.mass)) <= 0.01

    def test_output_validates(self):
        ds = sample(worked_factored(), 100, seed=3)
        assert validate_dataset(ds).ok

    def test_bad_count_rejected(self):
        with pytest.raises(ValueError):
            sample(worked_factored(), 0, seed=1)


class TestMleConcentration:
    def test_everything_within_huge_tolerance(self):
        assert mle_concentration_trial(0.5, 10, 50, 1.0, seed=5) == 1.0

    def test_single_sample_never_within_tight_tolerance(self):
        # the estimate is 0 or 1, never within 0.01 of 0.5
        assert mle_concentration_trial(0.5, 1, 200, 0.01, seed=5) == 0.0

    def test_hundred_samples_usually_land_within_a_tenth(self):
        assert mle_concentration_trial(0.5, 100, 1000, 0.1, seed=7) >= 0.95

    def test_deterministic_given_seed(self):
        a = mle_concentration_trial(0.3, 50, 200, 0.05, seed=9)
        b = mle_concentration_trial(0.3, 50, 200, 0.05, seed=9)
        assert a == b

    def test_range_checks(self):
        with pytest.raises(ValueError):
            mle_concentration_trial(0.0, 10, 10, 0.1, seed=1)
        with pytest.raises(ValueError):
            mle_concentration_trial(0.5, 0, 10, 0.1, seed=1)
        with pytest.raises(ValueError):
            mle_concentration_trial(0.5, 10, 0, 0.1, seed=1)
        with pytest.raises(ValueError):
            mle_concentration_trial(0.5, 10, 10, -0.1, seed=1)


class TestModelSpecConversions:
    def test_round_trip(self):
        rng = np.random.default_rng(43)
        spec = random_factored_spec(rng, 3, boolean=False)
        model = naive_model_from_factored(spec)
        back = factored_from_model(model)
        assert back.prior == spec.prior
        assert back.conditionals == spec.conditionals

    def test_model_uses_the_spec_parameters_verbatim(self):
        spec = worked_factored()
        model = naive_model_from_factored(spec)
        post = posterior(model, (1, 1))
        assert post[1] == pytest.approx(0.8, abs=1e-12)


class TestGreenRedFixture:
    def test_sixty_rows_two_to_one(self):
        ds = green_red_dataset()
        assert len(ds) == 60
        assert sum(1 for _, y in ds.rows if y == 0) == 40
        assert validate_dataset(ds).ok

    def test_uninformative_feature_reduces_posterior_to_prior(self):
        model = train(green_red_dataset())
        for value in (0, 1):
            post = posterior(model, (value,))
            assert post[0] == pytest.approx(2 / 3, abs=1e-12)
        assert classify(model, (0,)) == 0

    def test_perfectly_balanced_evaluation(self):
        ds = green_red_dataset()
        model = train(ds)
        report = evaluate(model, ds)
        # the majority class wins every row
        assert report.accuracy == pytest.approx(2 / 3, abs=1e-12)
