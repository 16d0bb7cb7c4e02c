"""Count-based estimators: class priors, categorical conditionals, Gaussians.

All estimates reduce to indicator sums over the training rows. Probabilities
are computed in exact rational arithmetic (counts and pseudocounts are
rationals) and converted to floats once, so the alpha=0 case reproduces
count ratios exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import EstimationError
from .schema import FiniteDistribution, Instance, LabeledDataset

# Gaussian variances are floored at max(ABS_FLOOR, REL_FLOOR * mean^2) to
# keep degenerate zero-spread classes from producing infinite densities.
VARIANCE_ABS_FLOOR = 1e-9
VARIANCE_REL_FLOOR = 1e-9

Row = tuple[Instance, int]


@dataclass(frozen=True)
class SmoothingConfig:
    """Pseudocounts for additive smoothing.

    ``alpha`` applies to per-feature conditionals (default 1, add-one);
    ``alpha_prior`` applies to the class prior and defaults to 0, keeping the
    prior a plain maximum-likelihood frequency.
    """

    alpha: float = 1.0
    alpha_prior: float = 0.0

    def __post_init__(self) -> None:
        if self.alpha < 0 or self.alpha_prior < 0:
            raise ValueError("pseudocounts must be non-negative")


@dataclass(frozen=True)
class ClassPrior:
    distribution: FiniteDistribution


@dataclass(frozen=True)
class ConditionalTable:
    """Per categorical feature index, one value distribution per class."""

    rows: dict[int, tuple[FiniteDistribution, ...]]


@dataclass(frozen=True)
class Gaussian:
    mean: float
    variance: float


@dataclass(frozen=True)
class GaussianParams:
    """Per real feature index, one (mean, variance) pair per class."""

    params: dict[int, tuple[Gaussian, ...]]


def indicator(condition: bool) -> int:
    """1 if the condition holds, 0 otherwise."""
    return 1 if condition else 0


def count_matching(dataset: LabeledDataset, predicate: Callable[[Row], bool]) -> int:
    """Number of rows satisfying the predicate: the sum of its indicators."""
    return sum(indicator(predicate(row)) for row in dataset.rows)


def _class_counts(dataset: LabeledDataset) -> list[int]:
    counts = [0] * len(dataset.label_space)
    for _, label in dataset.rows:
        counts[label] += 1
    return counts


def estimate_prior(dataset: LabeledDataset, alpha: float = 0.0) -> ClassPrior:
    """Estimate P(class) as (count + alpha) / (total + alpha * n_classes).

    With alpha=0 this is the maximum-likelihood frequency.
    """
    if alpha < 0:
        raise ValueError("pseudocount must be non-negative")
    if not dataset.rows:
        raise EstimationError("cannot estimate prior from zero examples")
    counts = _class_counts(dataset)
    a = Fraction(alpha)  # floats are exact rationals
    denom = Fraction(len(dataset.rows)) + a * len(counts)
    probs = tuple(float((Fraction(c) + a) / denom) for c in counts)
    return ClassPrior(FiniteDistribution(probs))


def estimate_categorical_conditionals(
    dataset: LabeledDataset, alpha: float = 1.0
) -> ConditionalTable:
    """Estimate P(feature value | class) for every categorical feature.

    Each (feature, class) row is (count + alpha) / (class count + alpha * arity),
    so every row sums to 1. With alpha=0, any class with zero examples leaves
    the conditional undefined and is an error; with alpha>0 it smooths to
    uniform.
    """
    if alpha < 0:
        raise ValueError("pseudocount must be non-negative")
    if not dataset.rows:
        raise EstimationError("cannot estimate conditionals from zero examples")
    class_counts = _class_counts(dataset)
    if alpha == 0:
        for j, c in enumerate(class_counts):
            if c == 0:
                raise EstimationError(
                    f"class {dataset.label_space.labels[j]!r} has no examples; "
                    "conditional undefined"
                )
    a = Fraction(alpha)
    rows: dict[int, tuple[FiniteDistribution, ...]] = {}
    for i, spec in enumerate(dataset.schema.features):
        if not spec.is_categorical:
            continue
        counts = [[0] * spec.arity for _ in range(len(dataset.label_space))]
        for instance, label in dataset.rows:
            counts[label][int(instance[i])] += 1
        per_class = []
        for j in range(len(dataset.label_space)):
            denom = Fraction(class_counts[j]) + a * spec.arity
            per_class.append(
                FiniteDistribution(
                    tuple(float((Fraction(c) + a) / denom) for c in counts[j])
                )
            )
        rows[i] = tuple(per_class)
    return ConditionalTable(rows)


def estimate_gaussian(dataset: LabeledDataset) -> GaussianParams:
    """Fit one Gaussian per (real feature, class): sample mean, MLE variance.

    The variance divisor is n (not n-1) and the result is floored at
    max(1e-9, 1e-9 * mean^2). Sums use compensated summation so results do
    not depend on row order.
    """
    real_indices = [
        i for i, spec in enumerate(dataset.schema.features) if not spec.is_categorical
    ]
    if not real_indices:
        return GaussianParams({})
    if not dataset.rows:
        raise EstimationError("cannot estimate Gaussian parameters from zero examples")
    class_counts = _class_counts(dataset)
    for j, c in enumerate(class_counts):
        if c == 0:
            raise EstimationError(
                f"class {dataset.label_space.labels[j]!r} has no examples; "
                "Gaussian parameters undefined"
            )
    params: dict[int, tuple[Gaussian, ...]] = {}
    for i in real_indices:
        per_class = []
        for j in range(len(dataset.label_space)):
            xs = [float(inst[i]) for inst, label in dataset.rows if label == j]
            mean = math.fsum(xs) / len(xs)
            variance = math.fsum((x - mean) ** 2 for x in xs) / len(xs)
            floor = max(VARIANCE_ABS_FLOOR, VARIANCE_REL_FLOOR * mean * mean)
            per_class.append(Gaussian(mean, max(variance, floor)))
        params[i] = tuple(per_class)
    return GaussianParams(params)
