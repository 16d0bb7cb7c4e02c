"""Seeded random builders shared across test modules."""

from __future__ import annotations

import numpy as np

from bayeskit import (
    CategoricalLikelihood,
    ClassPrior,
    FactoredSpec,
    FeatureSchema,
    FeatureSpec,
    FiniteDistribution,
    JointTable,
    LabelSpace,
    NaiveBayesModel,
    SmoothingConfig,
)


def random_distribution(rng: np.random.Generator, n: int, floor: float = 0.0):
    """A random probability vector, optionally bounded away from zero."""
    probs = rng.dirichlet(np.ones(n))
    if floor > 0:
        probs = (1 - floor * n) * probs + floor
    return FiniteDistribution(tuple(float(p) for p in probs / probs.sum()))


def random_categorical_schema(
    rng: np.random.Generator, n_features: int, max_arity: int = 4
) -> FeatureSchema:
    features = []
    for i in range(n_features):
        arity = int(rng.integers(2, max_arity + 1))
        features.append(
            FeatureSpec.categorical(f"f{i}", tuple(f"v{j}" for j in range(arity)))
        )
    return FeatureSchema(tuple(features))


def boolean_schema(n_features: int) -> FeatureSchema:
    return FeatureSchema(
        tuple(FeatureSpec.boolean(f"f{i}") for i in range(n_features))
    )


def label_space(n_classes: int) -> LabelSpace:
    return LabelSpace(tuple(f"c{k}" for k in range(n_classes)))


def random_factored_spec(
    rng: np.random.Generator,
    n_features: int,
    n_classes: int = 2,
    boolean: bool = True,
    floor: float = 0.0,
) -> FactoredSpec:
    schema = (
        boolean_schema(n_features)
        if boolean
        else random_categorical_schema(rng, n_features)
    )
    labels = label_space(n_classes)
    prior = random_distribution(rng, n_classes, floor)
    conditionals = tuple(
        tuple(random_distribution(rng, spec.arity, floor) for _ in range(n_classes))
        for spec in schema.features
    )
    return FactoredSpec(schema, labels, prior, conditionals)


def random_model(
    rng: np.random.Generator,
    n_features: int,
    n_classes: int = 2,
    floor: float = 0.0,
    boolean: bool = False,
) -> NaiveBayesModel:
    spec = random_factored_spec(rng, n_features, n_classes, boolean=boolean, floor=floor)
    likelihoods = tuple(CategoricalLikelihood(block) for block in spec.conditionals)
    return NaiveBayesModel(
        spec.schema,
        spec.label_space,
        ClassPrior(spec.prior),
        likelihoods,
        SmoothingConfig(alpha=0.0, alpha_prior=0.0),
    )


def random_joint(
    rng: np.random.Generator, n_features: int, n_classes: int = 2
) -> JointTable:
    schema = boolean_schema(n_features)
    labels = label_space(n_classes)
    cells = 2**n_features
    mass = rng.dirichlet(np.ones(cells * n_classes)).reshape(cells, n_classes)
    return JointTable(schema, labels, mass)


def random_instance(rng: np.random.Generator, schema: FeatureSchema):
    return tuple(int(rng.integers(0, spec.arity)) for spec in schema.features)


def worked_factored() -> FactoredSpec:
    """Two boolean features, two classes, the hand-checkable parameter set:
    P(c1)=0.5, P(f1=1|c1)=0.8, P(f2=1|c1)=0.6, P(f1=1|c0)=0.3, P(f2=1|c0)=0.4.
    """
    schema = FeatureSchema(
        (FeatureSpec.boolean("f1"), FeatureSpec.boolean("f2"))
    )
    labels = LabelSpace(("c0", "c1"))
    return FactoredSpec(
        schema,
        labels,
        FiniteDistribution((0.5, 0.5)),
        (
            (FiniteDistribution((0.7, 0.3)), FiniteDistribution((0.2, 0.8))),
            (FiniteDistribution((0.6, 0.4)), FiniteDistribution((0.4, 0.6))),
        ),
    )
