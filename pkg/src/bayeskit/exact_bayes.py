"""Exact inference on explicit joint distributions over small discrete spaces.

A JointTable enumerates every (instance, class) cell of an all-categorical
feature space and stores its probability mass, which makes the optimal
decision rules directly computable: max-posterior classification, minimum
expected-loss actions, and the minimum achievable error of any classifier.
The instance-space cap keeps this an oracle for desk-scale experiments, and
the parameter-count helpers make the exponential blowup of the unrestricted
table explicit next to the linear cost of the factored model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterator

import numpy as np

from .errors import EstimationError, InferenceError, ValidationError
from .schema import (
    RENORM_WINDOW,
    SUM_TOLERANCE,
    FeatureSchema,
    FiniteDistribution,
    Instance,
    LabeledDataset,
    LabelSpace,
    check_instance,
    validate_dataset,
)

# Hard cap on the enumerated instance space (number of feature-value
# combinations, not counting the class dimension).
MAX_INSTANCE_CELLS = 2**20


def instance_index(schema: FeatureSchema, instance: Instance) -> int:
    """Mixed-radix cell index of an instance; feature 0 is most significant."""
    problems = check_instance(schema, instance)
    if problems:
        raise ValidationError(
            "instance does not match schema: " + "; ".join(problems)
        )
    idx = 0
    for value, arity in zip(instance, schema.arities):
        idx = idx * arity + int(value)
    return idx


def instance_from_index(schema: FeatureSchema, index: int) -> Instance:
    """Inverse of instance_index."""
    values = []
    for arity in reversed(schema.arities):
        values.append(index % arity)
        index //= arity
    return tuple(reversed(values))


def enumerate_instances(schema: FeatureSchema) -> Iterator[Instance]:
    """All instances of an all-categorical schema, in cell-index order."""
    return product(*(range(a) for a in schema.arities))


@dataclass(frozen=True, eq=False)
class JointTable:
    """Explicit probability mass over every (instance, class) cell.

    ``mass[i, k]`` is P(instance i, class k) with i the mixed-radix cell
    index. The array is validated, normalized under the same window policy
    as FiniteDistribution, and frozen read-only.
    """

    schema: FeatureSchema
    label_space: LabelSpace
    mass: np.ndarray

    def __post_init__(self) -> None:
        if not self.schema.all_categorical:
            raise ValidationError("joint table requires discrete features")
        cells = math.prod(self.schema.arities)
        if cells > MAX_INSTANCE_CELLS:
            raise ValidationError(
                f"instance space has {cells} cells, above the "
                f"{MAX_INSTANCE_CELLS} cell limit"
            )
        arr = np.array(self.mass, dtype=np.float64)
        expected = (cells, len(self.label_space))
        if arr.shape != expected:
            raise ValidationError(
                f"mass array has shape {arr.shape}, expected {expected}"
            )
        if not np.isfinite(arr).all():
            raise ValidationError("mass entries must be finite")
        if (arr < 0).any():
            raise ValidationError("mass entries must be non-negative")
        total = float(arr.sum())
        if abs(total - 1.0) <= SUM_TOLERANCE:
            pass
        elif abs(total - 1.0) <= RENORM_WINDOW:
            arr = arr / total
        else:
            raise ValidationError(
                f"joint mass sums to {total!r}, outside the "
                f"{RENORM_WINDOW} renormalization window"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "mass", arr)

    @property
    def n_cells(self) -> int:
        return self.mass.shape[0]

    def index_of(self, instance: Instance) -> int:
        return instance_index(self.schema, instance)

    def instances(self) -> Iterator[Instance]:
        return enumerate_instances(self.schema)


@dataclass(frozen=True)
class LossMatrix:
    """entries[i][j] is the loss of taking action i when class j is true.

    Actions are indexed identically to labels; the diagonal need not be zero.
    """

    entries: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        if n < 1 or any(len(row) != n for row in self.entries):
            raise ValidationError("loss matrix must be square")
        converted = tuple(tuple(float(x) for x in row) for row in self.entries)
        for row in converted:
            for x in row:
                if not math.isfinite(x) or x < 0:
                    raise ValidationError("loss entries must be finite and non-negative")
        object.__setattr__(self, "entries", converted)

    @classmethod
    def zero_one(cls, n: int) -> "LossMatrix":
        return cls(
            tuple(
                tuple(0.0 if i == j else 1.0 for j in range(n)) for i in range(n)
            )
        )

    def __len__(self) -> int:
        return len(self.entries)


def estimate_joint(dataset: LabeledDataset) -> JointTable:
    """Unsmoothed MLE of the full joint: cell mass = cell count / row count.

    Counts are integers and the divisions are exact IEEE roundings of the
    count ratios, so the masses sum to 1 exactly in rational arithmetic.
    """
    if not dataset.schema.all_categorical:
        raise ValidationError("joint table requires discrete features")
    cells = math.prod(dataset.schema.arities)
    if cells > MAX_INSTANCE_CELLS:
        raise ValidationError(
            f"instance space has {cells} cells, above the "
            f"{MAX_INSTANCE_CELLS} cell limit"
        )
    if not dataset.rows:
        raise EstimationError("cannot estimate a joint table from zero examples")
    report = validate_dataset(dataset)
    if not report.ok:
        v = report.violations[0]
        raise ValidationError(f"dataset failed validation: row {v.row}: {v.reason}")
    counts = np.zeros((cells, len(dataset.label_space)), dtype=np.int64)
    for instance, label in dataset.rows:
        counts[instance_index(dataset.schema, instance), label] += 1
    mass = counts / len(dataset.rows)
    return JointTable(dataset.schema, dataset.label_space, mass)


def exact_posterior(joint: JointTable, instance: Instance) -> FiniteDistribution:
    """P(class | instance) by direct ratio of cell mass to instance marginal."""
    row = joint.mass[joint.index_of(instance)]
    total = math.fsum(row.tolist())
    if total == 0.0:
        raise InferenceError("instance has zero marginal probability")
    return FiniteDistribution(tuple(float(p) / total for p in row))


def classify_min_error(joint: JointTable, instance: Instance) -> int:
    """Most probable class given the instance; ties go to the lowest index."""
    post = exact_posterior(joint, instance)
    return max(range(len(post)), key=lambda k: (post[k], -k))


def conditional_risk(
    posterior: FiniteDistribution, loss: LossMatrix, action_index: int
) -> float:
    """Expected loss of one action: sum of loss[action][j] * posterior[j]."""
    if len(loss) != len(posterior):
        raise ValidationError(
            f"loss matrix size {len(loss)} does not match posterior size "
            f"{len(posterior)}"
        )
    if not 0 <= action_index < len(loss):
        raise ValidationError(f"action index {action_index} out of range")
    return math.fsum(
        loss.entries[action_index][j] * posterior[j] for j in range(len(posterior))
    )


def classify_min_risk(joint: JointTable, instance: Instance, loss: LossMatrix) -> int:
    """Action with minimum conditional risk; ties go to the lowest index.

    With zero-one loss the risk of action i is 1 - posterior[i], so this
    reduces to classify_min_error on every instance.
    """
    post = exact_posterior(joint, instance)
    risks = [conditional_risk(post, loss, i) for i in range(len(loss))]
    return min(range(len(risks)), key=lambda i: (risks[i], i))


def bayes_error(joint: JointTable) -> float:
    """Minimum achievable misclassification probability on this joint.

    Sum over instances with positive marginal of P(x) * (1 - max posterior),
    which no classifier, deterministic or not, can beat.
    """
    marginals = joint.mass.sum(axis=1)
    top = joint.mass.max(axis=1)
    positive = marginals > 0
    return float(np.sum(marginals[positive] - top[positive]))


def param_count(kind: str, n: int) -> int:
    """Independent parameters needed for n boolean features and a boolean class.

    "full_joint" counts the unrestricted per-class instance distributions,
    2 * (2^n - 1); "naive" counts one Bernoulli per feature per class, 2n.
    Exact integer arithmetic throughout.
    """
    if n < 1:
        raise ValueError("attribute count must be at least 1")
    if kind == "full_joint":
        return 2 * (2**n - 1)
    if kind == "naive":
        return 2 * n
    raise ValueError(f"unknown parameter-count kind {kind!r}")
