"""The factored classifier: prior times per-feature conditionals, in log space.

The model assumes feature independence given the class, so its joint score
for a class is the log prior plus one log-likelihood term per feature. All
inference works on log scores with log-sum-exp normalization: the raw product
of per-feature probabilities underflows 64-bit floats near 20-30 features,
the normalized posterior does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InferenceError, ValidationError
from .estimation import (
    ClassPrior,
    Gaussian,
    SmoothingConfig,
    estimate_categorical_conditionals,
    estimate_gaussian,
    estimate_prior,
)
from .schema import (
    FeatureSchema,
    FiniteDistribution,
    Instance,
    LabeledDataset,
    LabelSpace,
    check_instance,
    validate_dataset,
)

_LOG_TWO_PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class CategoricalLikelihood:
    """One value distribution per class for a categorical feature."""

    per_class: tuple[FiniteDistribution, ...]


@dataclass(frozen=True)
class GaussianLikelihood:
    """One (mean, variance) pair per class for a real feature."""

    per_class: tuple[Gaussian, ...]


Likelihood = CategoricalLikelihood | GaussianLikelihood


@dataclass(frozen=True)
class NaiveBayesModel:
    """Class prior plus one kind-matched likelihood model per feature.

    Models are frozen after construction and safe to share across threads.
    """

    schema: FeatureSchema
    label_space: LabelSpace
    prior: ClassPrior
    likelihoods: tuple[Likelihood, ...]
    smoothing: SmoothingConfig

    def __post_init__(self) -> None:
        n_classes = len(self.label_space)
        if len(self.prior.distribution) != n_classes:
            raise ValidationError("prior length does not match the label space")
        if len(self.likelihoods) != len(self.schema.features):
            raise ValidationError("need exactly one likelihood model per feature")
        for spec, lik in zip(self.schema.features, self.likelihoods):
            if spec.is_categorical:
                if not isinstance(lik, CategoricalLikelihood):
                    raise ValidationError(
                        f"feature {spec.name!r} is categorical but its likelihood is not"
                    )
                if len(lik.per_class) != n_classes:
                    raise ValidationError(
                        f"feature {spec.name!r}: need one distribution per class"
                    )
                for dist in lik.per_class:
                    if len(dist) != spec.arity:
                        raise ValidationError(
                            f"feature {spec.name!r}: distribution arity mismatch"
                        )
            else:
                if not isinstance(lik, GaussianLikelihood):
                    raise ValidationError(
                        f"feature {spec.name!r} is real but its likelihood is not Gaussian"
                    )
                if len(lik.per_class) != n_classes:
                    raise ValidationError(
                        f"feature {spec.name!r}: need one Gaussian per class"
                    )
                for g in lik.per_class:
                    if not (g.variance > 0 and math.isfinite(g.variance)):
                        raise ValidationError(
                            f"feature {spec.name!r}: variance must be positive"
                        )


def train(
    dataset: LabeledDataset, config: SmoothingConfig = SmoothingConfig()
) -> NaiveBayesModel:
    """Fit prior and per-feature conditionals from a validated dataset.

    Deterministic: the same dataset and config always produce an identical
    model (and an identical serialized file).
    """
    report = validate_dataset(dataset)
    if not report.ok:
        detail = "; ".join(f"row {v.row}: {v.reason}" for v in report.violations[:5])
        raise ValidationError(f"dataset failed validation: {detail}")
    prior = estimate_prior(dataset, config.alpha_prior)
    has_categorical = any(f.is_categorical for f in dataset.schema.features)
    has_real = not all(f.is_categorical for f in dataset.schema.features)
    tables = (
        estimate_categorical_conditionals(dataset, config.alpha)
        if has_categorical
        else None
    )
    gaussians = estimate_gaussian(dataset) if has_real else None
    likelihoods: list[Likelihood] = []
    for i, spec in enumerate(dataset.schema.features):
        if spec.is_categorical:
            likelihoods.append(CategoricalLikelihood(tables.rows[i]))
        else:
            likelihoods.append(GaussianLikelihood(gaussians.params[i]))
    return NaiveBayesModel(
        dataset.schema, dataset.label_space, prior, tuple(likelihoods), config
    )


def _check(model: NaiveBayesModel, instance: Instance) -> None:
    problems = check_instance(model.schema, instance)
    if problems:
        raise ValidationError(
            "instance does not match model schema: " + "; ".join(problems)
        )


def _class_score(model: NaiveBayesModel, instance: Instance, k: int) -> float:
    p = model.prior.distribution[k]
    score = math.log(p) if p > 0 else -math.inf
    for value, lik in zip(instance, model.likelihoods):
        if isinstance(lik, CategoricalLikelihood):
            q = lik.per_class[k][int(value)]
            score += math.log(q) if q > 0 else -math.inf
        else:
            g = lik.per_class[k]
            x = float(value)
            score += -0.5 * (_LOG_TWO_PI + math.log(g.variance)) - (
                (x - g.mean) ** 2
            ) / (2.0 * g.variance)
    return score


def _all_scores(model: NaiveBayesModel, instance: Instance) -> list[float]:
    _check(model, instance)
    return [_class_score(model, instance, k) for k in range(len(model.label_space))]


def joint_log_score(model: NaiveBayesModel, instance: Instance, class_index: int) -> float:
    """log P(class) + sum of per-feature log-likelihoods; -inf on zero terms."""
    _check(model, instance)
    if not 0 <= class_index < len(model.label_space):
        raise ValidationError(f"class index {class_index} out of range")
    return _class_score(model, instance, class_index)


def posterior(model: NaiveBayesModel, instance: Instance) -> FiniteDistribution:
    """Normalized class distribution for one instance.

    Computed as a softmax over the joint log scores (subtract the max, then
    exponentiate and normalize), which equals the prior-times-likelihood
    ratio exactly in exact arithmetic but stays finite under heavy underflow.

    Raises InferenceError when every class scores -inf.
    """
    scores = _all_scores(model, instance)
    top = max(scores)
    if top == -math.inf:
        raise InferenceError("instance has zero probability under every class")
    exps = [math.exp(s - top) if s > -math.inf else 0.0 for s in scores]
    denom = math.fsum(exps)
    return FiniteDistribution(tuple(e / denom for e in exps))


def classify(model: NaiveBayesModel, instance: Instance) -> int:
    """Class index with the highest joint log score; ties go to the lowest index.

    The normalizing denominator is shared by every class, so the argmax over
    unnormalized scores equals the argmax over the posterior.
    """
    scores = _all_scores(model, instance)
    if max(scores) == -math.inf:
        raise InferenceError("instance has zero probability under every class")
    return max(range(len(scores)), key=lambda k: (scores[k], -k))
