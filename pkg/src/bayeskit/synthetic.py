"""Ground-truth generators: sampleable distributions with known parameters.

A generator is either an explicit joint table or a factored form (class
prior plus per-feature value distributions); the factored form satisfies
feature-given-class conditional independence by construction, so datasets
drawn from it have a known optimal error rate and a correctly specified
factored classifier.

Sampling uses NumPy's PCG64 generator (``numpy.random.default_rng``) and
inverse-CDF lookup over the enumerated cells; given the same spec, count,
and seed the output is identical across runs and platforms. This generator
choice is part of the reproducibility contract and must not change silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .exact_bayes import JointTable, instance_from_index
from .estimation import ClassPrior, SmoothingConfig
from .naive_bayes import CategoricalLikelihood, NaiveBayesModel
from .schema import (
    FeatureSchema,
    FeatureSpec,
    FiniteDistribution,
    LabeledDataset,
    LabelSpace,
    validate_dataset,
)


@dataclass(frozen=True)
class FactoredSpec:
    """Class prior plus per-feature, per-class value distributions.

    conditionals[i][k] is the value distribution of feature i under class k.
    """

    schema: FeatureSchema
    label_space: LabelSpace
    prior: FiniteDistribution
    conditionals: tuple[tuple[FiniteDistribution, ...], ...]

    def __post_init__(self) -> None:
        if not self.schema.all_categorical:
            raise ValidationError("factored generators require categorical features")
        if len(self.prior) != len(self.label_space):
            raise ValidationError("prior length does not match the label space")
        if len(self.conditionals) != len(self.schema.features):
            raise ValidationError("need one conditional block per feature")
        for spec, block in zip(self.schema.features, self.conditionals):
            if len(block) != len(self.label_space):
                raise ValidationError(
                    f"feature {spec.name!r}: need one distribution per class"
                )
            for dist in block:
                if len(dist) != spec.arity:
                    raise ValidationError(
                        f"feature {spec.name!r}: distribution arity mismatch"
                    )


@dataclass(frozen=True)
class ExplicitSpec:
    """A generator that is simply an explicit joint table."""

    joint: JointTable


GeneratorSpec = FactoredSpec | ExplicitSpec


def schema_of(spec: GeneratorSpec) -> FeatureSchema:
    return spec.joint.schema if isinstance(spec, ExplicitSpec) else spec.schema


def label_space_of(spec: GeneratorSpec) -> LabelSpace:
    return spec.joint.label_space if isinstance(spec, ExplicitSpec) else spec.label_space


def to_joint(spec: GeneratorSpec) -> JointTable:
    """Expand a generator to its explicit joint table.

    Explicit specs pass through unchanged; factored specs expand to
    mass(x, k) = prior[k] * product over features of conditionals[i][k][x_i].
    """
    if isinstance(spec, ExplicitSpec):
        return spec.joint
    n_classes = len(spec.label_space)
    mass = np.array([list(spec.prior)], dtype=np.float64)  # (1, n_classes)
    for block in spec.conditionals:
        table = np.array([[dist[v] for dist in block] for v in range(len(block[0]))])
        # (cells, K) x (arity, K) -> (cells * arity, K), feature 0 most significant
        mass = (mass[:, None, :] * table[None, :, :]).reshape(-1, n_classes)
    return JointTable(spec.schema, spec.label_space, mass)


def sample(spec: GeneratorSpec, count: int, seed: int) -> LabeledDataset:
    """Draw count i.i.d. rows from the generator's joint, deterministically.

    Cells are laid out in (instance index, class index) order, their masses
    cumulated into a CDF, and each uniform draw mapped to the first cell
    whose cumulative mass exceeds it.
    """
    if count < 1:
        raise ValueError("sample count must be at least 1")
    joint = to_joint(spec)
    flat = joint.mass.ravel()
    cdf = np.cumsum(flat)
    cdf[-1] = max(cdf[-1], 1.0)  # guard against cumulative rounding below 1
    rng = np.random.default_rng(seed)
    draws = rng.random(count)
    flat_idx = np.searchsorted(cdf, draws, side="right")
    n_classes = len(joint.label_space)
    cell_idx = flat_idx // n_classes
    labels = flat_idx % n_classes
    rows = tuple(
        (instance_from_index(joint.schema, int(c)), int(k))
        for c, k in zip(cell_idx, labels)
    )
    dataset = LabeledDataset(joint.schema, joint.label_space, rows)
    report = validate_dataset(dataset)
    if not report.ok:  # cannot happen for decoded cells; cheap belt-and-braces
        raise ValidationError("sampled dataset failed validation")
    return dataset


def mle_concentration_trial(
    p: float, samples_per_trial: int, trials: int, tolerance: float, seed: int
) -> float:
    """Fraction of repeated Bernoulli(p) experiments whose frequency estimate
    lands within tolerance of p.

    Each trial draws samples_per_trial coins and takes the sample frequency.
    Per-trial generators are derived by spawning NumPy SeedSequence children
    of the root seed, so trials are order-independent and the result is
    deterministic given the seed.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    if samples_per_trial < 1:
        raise ValueError("samples_per_trial must be at least 1")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    children = np.random.SeedSequence(seed).spawn(trials)
    within = 0
    for child in children:
        rng = np.random.default_rng(child)
        estimate = float(np.mean(rng.random(samples_per_trial) < p))
        if abs(estimate - p) <= tolerance:
            within += 1
    return within / trials


def naive_model_from_factored(spec: FactoredSpec) -> NaiveBayesModel:
    """Build the factored classifier whose parameters are the generator's own."""
    likelihoods = tuple(CategoricalLikelihood(block) for block in spec.conditionals)
    return NaiveBayesModel(
        spec.schema,
        spec.label_space,
        ClassPrior(spec.prior),
        likelihoods,
        SmoothingConfig(alpha=0.0, alpha_prior=0.0),
    )


def factored_from_model(model: NaiveBayesModel) -> FactoredSpec:
    """View an all-categorical model as a generator with the same parameters."""
    if not model.schema.all_categorical:
        raise ValidationError("only all-categorical models convert to generators")
    return FactoredSpec(
        model.schema,
        model.label_space,
        model.prior.distribution,
        tuple(lik.per_class for lik in model.likelihoods),
    )


def green_red_dataset() -> LabeledDataset:
    """The 2:1 two-class fixture: 40 GREEN rows and 20 RED rows.

    The single boolean feature is split evenly within each class, so it
    carries no information and the trained posterior reduces to the prior.
    """
    schema = FeatureSchema((FeatureSpec.boolean("marker"),))
    labels = LabelSpace(("GREEN", "RED"))
    rows = []
    for value in (0, 1):
        rows.extend([((value,), 0)] * 20)
    for value in (0, 1):
        rows.extend([((value,), 1)] * 10)
    return LabeledDataset(schema, labels, tuple(rows))
