"""Feature schemas, labeled datasets, and normalized finite distributions.

Everything here is immutable after construction and safe to share across
concurrent readers. Feature order and label order are declaration order and
act as the deterministic tie-break authority everywhere downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

# A vector of probabilities must sum to 1 within this window to be accepted
# as-is; anything within RENORM_WINDOW is renormalized (absorbing rounding
# from file round-trips); anything further off is rejected as a real bug.
SUM_TOLERANCE = 1e-12
RENORM_WINDOW = 1e-9

# One feature value: a categorical index or a finite real number.
Value = int | float

# One observation: one value per schema position, in schema order.
Instance = tuple[Value, ...]


@dataclass(frozen=True)
class FeatureSpec:
    """A single named feature: categorical over fixed values, or real-valued.

    Booleans are represented as 2-ary categoricals with values
    ``("false", "true")`` so one code path serves boolean and general
    discrete features.
    """

    name: str
    kind: str  # "categorical" | "real"
    values: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValidationError("feature name must be non-empty")
        if self.kind == "categorical":
            if self.values is None or len(self.values) < 2:
                raise ValidationError(
                    f"categorical feature {self.name!r} needs at least 2 values"
                )
            if len(set(self.values)) != len(self.values):
                raise ValidationError(
                    f"categorical feature {self.name!r} has duplicate values"
                )
        elif self.kind == "real":
            if self.values is not None:
                raise ValidationError(
                    f"real feature {self.name!r} must not declare values"
                )
        else:
            raise ValidationError(f"unknown feature kind {self.kind!r}")

    @classmethod
    def categorical(cls, name: str, values) -> "FeatureSpec":
        return cls(name, "categorical", tuple(values))

    @classmethod
    def boolean(cls, name: str) -> "FeatureSpec":
        return cls(name, "categorical", ("false", "true"))

    @classmethod
    def real(cls, name: str) -> "FeatureSpec":
        return cls(name, "real")

    @property
    def is_categorical(self) -> bool:
        return self.kind == "categorical"

    @property
    def arity(self) -> int:
        if self.values is None:
            raise ValidationError(f"real feature {self.name!r} has no arity")
        return len(self.values)


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered feature declarations; position i is significant everywhere."""

    features: tuple[FeatureSpec, ...]

    def __post_init__(self) -> None:
        if len(self.features) < 1:
            raise ValidationError("schema needs at least one feature")
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise ValidationError("feature names must be unique within a schema")

    def __len__(self) -> int:
        return len(self.features)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    @property
    def all_categorical(self) -> bool:
        return all(f.is_categorical for f in self.features)

    @property
    def arities(self) -> tuple[int, ...]:
        """Per-feature value counts; only defined for all-categorical schemas."""
        return tuple(f.arity for f in self.features)


@dataclass(frozen=True)
class LabelSpace:
    """Ordered class labels; index k identifies the k-th class everywhere."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.labels) < 2:
            raise ValidationError("label space needs at least 2 labels")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("labels must be distinct")

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, name: str) -> int:
        try:
            return self.labels.index(name)
        except ValueError:
            raise ValidationError(f"unknown label {name!r}") from None


def check_instance(schema: FeatureSchema, values: Instance) -> list[str]:
    """Return a list of constraint violations for one instance (empty if ok)."""
    if len(values) != len(schema.features):
        return [
            f"expected {len(schema.features)} values, got {len(values)}"
        ]
    problems: list[str] = []
    for spec, v in zip(schema.features, values):
        if spec.is_categorical:
            if isinstance(v, bool) or not isinstance(v, int):
                problems.append(
                    f"feature {spec.name!r}: categorical value must be an "
                    f"integer index, got {v!r}"
                )
            elif not 0 <= v < spec.arity:
                problems.append(
                    f"feature {spec.name!r}: index {v} out of range for "
                    f"arity {spec.arity}"
                )
        else:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                problems.append(
                    f"feature {spec.name!r}: real value must be a number, got {v!r}"
                )
            elif not math.isfinite(v):
                problems.append(
                    f"feature {spec.name!r}: real value must be finite, got {v!r}"
                )
    return problems


@dataclass(frozen=True)
class LabeledDataset:
    """Immutable rows of (instance, label index) pairs under one schema."""

    schema: FeatureSchema
    label_space: LabelSpace
    rows: tuple[tuple[Instance, int], ...]

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class Violation:
    row: int
    reason: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_dataset(dataset: LabeledDataset) -> ValidationReport:
    """Check every row against the dataset's schema and label space.

    Violations are data, not errors: the report lists each offending row
    index with a reason and never raises. Any instance accepted here can be
    consumed by every estimation and inference operation without further
    checks.
    """
    violations: list[Violation] = []
    n_labels = len(dataset.label_space)
    for i, (instance, label) in enumerate(dataset.rows):
        if isinstance(label, bool) or not isinstance(label, int):
            violations.append(Violation(i, f"label must be an integer index, got {label!r}"))
        elif not 0 <= label < n_labels:
            violations.append(
                Violation(i, f"label index {label} out of range for {n_labels} labels")
            )
        for reason in check_instance(dataset.schema, instance):
            violations.append(Violation(i, reason))
    return ValidationReport(tuple(violations))


@dataclass(frozen=True)
class FiniteDistribution:
    """Probabilities over an indexed finite domain, normalized on construction.

    Inputs whose sum is within RENORM_WINDOW of 1 are renormalized (this
    absorbs serialization rounding); inputs already within SUM_TOLERANCE are
    kept bit-for-bit, so exact rational estimates survive unchanged. Anything
    further off is rejected.
    """

    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        probs = tuple(float(p) for p in self.probabilities)
        if not probs:
            raise ValidationError("distribution needs at least one entry")
        for p in probs:
            if not math.isfinite(p):
                raise ValidationError(f"probabilities must be finite, got {p!r}")
            if p < 0:
                raise ValidationError(f"probabilities must be non-negative, got {p!r}")
        total = math.fsum(probs)
        if abs(total - 1.0) <= SUM_TOLERANCE:
            pass
        elif abs(total - 1.0) <= RENORM_WINDOW:
            probs = tuple(p / total for p in probs)
        else:
            raise ValidationError(
                f"probabilities sum to {total!r}, outside the "
                f"{RENORM_WINDOW} renormalization window"
            )
        object.__setattr__(self, "probabilities", probs)

    @classmethod
    def uniform(cls, n: int) -> "FiniteDistribution":
        return cls(tuple(1.0 / n for _ in range(n)))

    def __len__(self) -> int:
        return len(self.probabilities)

    def __getitem__(self, i: int) -> float:
        return self.probabilities[i]

    def __iter__(self):
        return iter(self.probabilities)
