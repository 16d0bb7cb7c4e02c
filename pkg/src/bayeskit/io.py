"""Dataset ingestion and JSON persistence for models, joints, and specs.

All persisted artifacts share one container convention: a JSON object with
an integer ``format_version`` (currently 1) and a ``kind`` discriminator.
Probabilities serialize through Python's shortest round-trip float
representation, so save followed by load reproduces every stored value
bit-for-bit and serialization is deterministic.

Datasets travel as CSV (header row, UTF-8, standard quoting) or JSONL (one
flat object per line). Without a sidecar schema, a column is real when every
cell parses as a finite decimal number and categorical otherwise, with
values ordered by first appearance; a sidecar schema is authoritative and
any cell violating it is an error. Missing values are rejected.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .errors import FormatError, ValidationError
from .estimation import ClassPrior, Gaussian, SmoothingConfig
from .exact_bayes import JointTable, LossMatrix
from .independence import TripleJoint
from .naive_bayes import (
    CategoricalLikelihood,
    GaussianLikelihood,
    NaiveBayesModel,
)
from .schema import (
    FeatureSchema,
    FeatureSpec,
    FiniteDistribution,
    Instance,
    LabeledDataset,
    LabelSpace,
    validate_dataset,
)
from .synthetic import ExplicitSpec, FactoredSpec, GeneratorSpec

FORMAT_VERSION = 1

PathLike = str | Path


# ---------------------------------------------------------------------------
# container plumbing


def _read_json(path: PathLike) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: expected a JSON object at top level")
    return obj


def _write_json(obj: dict, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(obj, indent=2))
        fh.write("\n")


def _check_container(obj: dict, kinds: tuple[str, ...], path: PathLike) -> str:
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format_version {version!r}")
    kind = obj.get("kind")
    if kind not in kinds:
        raise FormatError(f"{path}: expected kind in {kinds}, got {kind!r}")
    return kind


# ---------------------------------------------------------------------------
# schema and label-space payloads


def schema_to_obj(schema: FeatureSchema) -> list[dict]:
    out = []
    for spec in schema.features:
        if spec.is_categorical:
            out.append(
                {"name": spec.name, "kind": "categorical", "values": list(spec.values)}
            )
        else:
            out.append({"name": spec.name, "kind": "real"})
    return out


def schema_from_obj(obj: Any, where: str) -> FeatureSchema:
    if not isinstance(obj, list) or not obj:
        raise FormatError(f"{where}: 'features' must be a non-empty list")
    features = []
    for entry in obj:
        if not isinstance(entry, dict) or "name" not in entry or "kind" not in entry:
            raise FormatError(f"{where}: each feature needs 'name' and 'kind'")
        name, kind = entry["name"], entry["kind"]
        if kind == "boolean":
            features.append(FeatureSpec.boolean(name))
        elif kind == "categorical":
            values = entry.get("values")
            if not isinstance(values, list):
                raise FormatError(f"{where}: categorical feature {name!r} needs 'values'")
            features.append(FeatureSpec.categorical(name, values))
        elif kind == "real":
            features.append(FeatureSpec.real(name))
        else:
            raise FormatError(f"{where}: unknown feature kind {kind!r}")
    return FeatureSchema(tuple(features))


def _labels_from_obj(obj: Any, where: str) -> LabelSpace:
    if not isinstance(obj, list) or not all(isinstance(x, str) for x in obj):
        raise FormatError(f"{where}: 'label_space' must be a list of strings")
    return LabelSpace(tuple(obj))


def load_schema_sidecar(path: PathLike) -> tuple[FeatureSchema, LabelSpace | None]:
    """Read a schema container: declared features plus optional label order."""
    obj = _read_json(path)
    _check_container(obj, ("schema",), path)
    schema = schema_from_obj(obj.get("features"), str(path))
    labels = None
    if "labels" in obj:
        labels = _labels_from_obj(obj["labels"], str(path))
    return schema, labels


def save_schema_sidecar(
    schema: FeatureSchema, path: PathLike, labels: LabelSpace | None = None
) -> None:
    obj: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "kind": "schema",
        "features": schema_to_obj(schema),
    }
    if labels is not None:
        obj["labels"] = list(labels.labels)
    _write_json(obj, path)


# ---------------------------------------------------------------------------
# model persistence


def save_model(model: NaiveBayesModel | JointTable, path: PathLike) -> None:
    """Write a model container; see load_model for the inverse."""
    if isinstance(model, NaiveBayesModel):
        likelihoods = []
        for lik in model.likelihoods:
            if isinstance(lik, CategoricalLikelihood):
                likelihoods.append(
                    {
                        "kind": "categorical",
                        "per_class": [list(dist) for dist in lik.per_class],
                    }
                )
            else:
                likelihoods.append(
                    {
                        "kind": "gaussian",
                        "per_class": [
                            {"mean": g.mean, "variance": g.variance}
                            for g in lik.per_class
                        ],
                    }
                )
        obj = {
            "format_version": FORMAT_VERSION,
            "kind": "naive_bayes",
            "schema": schema_to_obj(model.schema),
            "label_space": list(model.label_space.labels),
            "prior": list(model.prior.distribution),
            "likelihoods": likelihoods,
            "smoothing": {
                "alpha": model.smoothing.alpha,
                "alpha_prior": model.smoothing.alpha_prior,
            },
        }
    elif isinstance(model, JointTable):
        obj = {
            "format_version": FORMAT_VERSION,
            "kind": "joint_table",
            "schema": schema_to_obj(model.schema),
            "label_space": list(model.label_space.labels),
            "mass": [list(row) for row in model.mass.tolist()],
        }
    else:
        raise TypeError(f"cannot save object of type {type(model).__name__}")
    _write_json(obj, path)


def _naive_from_obj(obj: dict, path: PathLike) -> NaiveBayesModel:
    schema = schema_from_obj(obj["schema"], str(path))
    labels = _labels_from_obj(obj["label_space"], str(path))
    prior = ClassPrior(FiniteDistribution(tuple(obj["prior"])))
    likelihoods: list[CategoricalLikelihood | GaussianLikelihood] = []
    for entry in obj["likelihoods"]:
        if entry["kind"] == "categorical":
            likelihoods.append(
                CategoricalLikelihood(
                    tuple(FiniteDistribution(tuple(row)) for row in entry["per_class"])
                )
            )
        elif entry["kind"] == "gaussian":
            likelihoods.append(
                GaussianLikelihood(
                    tuple(
                        Gaussian(float(g["mean"]), float(g["variance"]))
                        for g in entry["per_class"]
                    )
                )
            )
        else:
            raise FormatError(f"{path}: unknown likelihood kind {entry['kind']!r}")
    smoothing = obj.get("smoothing", {})
    config = SmoothingConfig(
        alpha=float(smoothing.get("alpha", 1.0)),
        alpha_prior=float(smoothing.get("alpha_prior", 0.0)),
    )
    return NaiveBayesModel(schema, labels, prior, tuple(likelihoods), config)


def _joint_from_obj(obj: dict, path: PathLike) -> JointTable:
    schema = schema_from_obj(obj["schema"], str(path))
    labels = _labels_from_obj(obj["label_space"], str(path))
    return JointTable(schema, labels, np.array(obj["mass"], dtype=np.float64))


def load_model(path: PathLike) -> NaiveBayesModel | JointTable:
    """Read a model container back; invariant violations fail the load."""
    obj = _read_json(path)
    kind = _check_container(obj, ("naive_bayes", "joint_table"), path)
    try:
        if kind == "naive_bayes":
            return _naive_from_obj(obj, path)
        return _joint_from_obj(obj, path)
    except (KeyError, IndexError, TypeError) as exc:
        raise FormatError(f"{path}: malformed payload ({exc!r})") from exc


# ---------------------------------------------------------------------------
# generator specs, triple joints, loss matrices


def save_generator_spec(spec: GeneratorSpec, path: PathLike) -> None:
    if isinstance(spec, FactoredSpec):
        obj = {
            "format_version": FORMAT_VERSION,
            "kind": "generator_spec",
            "spec_type": "factored",
            "schema": schema_to_obj(spec.schema),
            "label_space": list(spec.label_space.labels),
            "prior": list(spec.prior),
            "conditionals": [
                [list(dist) for dist in block] for block in spec.conditionals
            ],
        }
    else:
        obj = {
            "format_version": FORMAT_VERSION,
            "kind": "generator_spec",
            "spec_type": "explicit",
            "schema": schema_to_obj(spec.joint.schema),
            "label_space": list(spec.joint.label_space.labels),
            "mass": [list(row) for row in spec.joint.mass.tolist()],
        }
    _write_json(obj, path)


def load_generator_spec(path: PathLike) -> GeneratorSpec:
    obj = _read_json(path)
    _check_container(obj, ("generator_spec",), path)
    spec_type = obj.get("spec_type")
    try:
        schema = schema_from_obj(obj["schema"], str(path))
        labels = _labels_from_obj(obj["label_space"], str(path))
        if spec_type == "factored":
            prior = FiniteDistribution(tuple(obj["prior"]))
            conditionals = tuple(
                tuple(FiniteDistribution(tuple(row)) for row in block)
                for block in obj["conditionals"]
            )
            return FactoredSpec(schema, labels, prior, conditionals)
        if spec_type == "explicit":
            return ExplicitSpec(
                JointTable(schema, labels, np.array(obj["mass"], dtype=np.float64))
            )
    except (KeyError, IndexError, TypeError) as exc:
        raise FormatError(f"{path}: malformed payload ({exc!r})") from exc
    raise FormatError(f"{path}: unknown spec_type {spec_type!r}")


def save_triple_joint(joint: TripleJoint, path: PathLike) -> None:
    obj = {
        "format_version": FORMAT_VERSION,
        "kind": "triple_joint",
        "variables": list(joint.names),
        "mass": joint.mass.tolist(),
    }
    _write_json(obj, path)


def load_triple_joint(path: PathLike) -> TripleJoint:
    obj = _read_json(path)
    _check_container(obj, ("triple_joint",), path)
    names = obj.get("variables")
    if not isinstance(names, list) or len(names) != 3:
        raise FormatError(f"{path}: 'variables' must list exactly three names")
    try:
        return TripleJoint(tuple(names), np.array(obj["mass"], dtype=np.float64))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: malformed payload ({exc!r})") from exc


def save_loss_matrix(loss: LossMatrix, path: PathLike) -> None:
    obj = {
        "format_version": FORMAT_VERSION,
        "kind": "loss_matrix",
        "entries": [list(row) for row in loss.entries],
    }
    _write_json(obj, path)


def load_loss_matrix(path: PathLike) -> LossMatrix:
    obj = _read_json(path)
    _check_container(obj, ("loss_matrix",), path)
    entries = obj.get("entries")
    if not isinstance(entries, list):
        raise FormatError(f"{path}: 'entries' must be a list of rows")
    return LossMatrix(tuple(tuple(row) for row in entries))


# ---------------------------------------------------------------------------
# tabular ingestion


def _read_table(path: PathLike, format: str) -> tuple[list[str], list[tuple[int, list]]]:
    """Read a CSV or JSONL file into a header plus (line number, cells) rows."""
    if format == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise FormatError(f"{path}: empty file")
            rows = [(line, cells) for line, cells in enumerate(reader, start=2)]
        for line, cells in rows:
            if len(cells) != len(header):
                raise FormatError(
                    f"{path}: line {line}: expected {len(header)} fields, "
                    f"got {len(cells)}"
                )
        return header, rows
    if format == "jsonl":
        header: list[str] | None = None
        rows = []
        with open(path, encoding="utf-8") as fh:
            for line, text in enumerate(fh, start=1):
                if not text.strip():
                    continue
                try:
                    obj = json.loads(text)
                except json.JSONDecodeError as exc:
                    raise FormatError(f"{path}: line {line}: not valid JSON: {exc}") from exc
                if not isinstance(obj, dict):
                    raise FormatError(f"{path}: line {line}: expected a flat object")
                if header is None:
                    header = list(obj.keys())
                elif set(obj.keys()) != set(header):
                    raise FormatError(
                        f"{path}: line {line}: keys differ from the first record"
                    )
                rows.append((line, [obj[name] for name in header]))
        if header is None:
            raise FormatError(f"{path}: empty file")
        return header, rows
    raise ValueError(f"unknown dataset format {format!r} (use 'csv' or 'jsonl')")


def _is_missing(cell: Any) -> bool:
    return cell is None or (isinstance(cell, str) and cell == "")


def _as_real(cell: Any) -> float | None:
    """The cell as a finite real number, or None when it is not one."""
    if isinstance(cell, bool):
        return None
    if isinstance(cell, (int, float)):
        return float(cell) if math.isfinite(cell) else None
    if isinstance(cell, str):
        try:
            x = float(cell)
        except ValueError:
            return None
        return x if math.isfinite(x) else None
    return None


def _as_name(cell: Any) -> str:
    """Canonical categorical value name for a raw cell."""
    if isinstance(cell, bool):
        return "true" if cell else "false"
    if isinstance(cell, str):
        return cell
    return json.dumps(cell)


def _column_positions(header: list[str], wanted: list[str], path: PathLike) -> list[int]:
    if len(set(header)) != len(header):
        raise FormatError(f"{path}: duplicate column names in header")
    positions = []
    for name in wanted:
        if name not in header:
            raise FormatError(f"{path}: missing column {name!r}")
        positions.append(header.index(name))
    return positions


def load_dataset(
    path: PathLike,
    format: str = "csv",
    label_column: str = "label",
    schema: FeatureSchema | None = None,
    label_space: LabelSpace | None = None,
) -> LabeledDataset:
    """Read a labeled dataset from CSV or JSONL.

    Without a declared schema, feature columns are every column except the
    label column, typed by inference (real when every cell is a finite
    decimal, else categorical in first-appearance order) and ordered as in
    the file. With a declared schema, columns are matched by name, the
    declared types and value orders are authoritative, and violations raise.
    The returned dataset always passes validate_dataset.
    """
    header, rows = _read_table(path, format)
    if not rows:
        raise FormatError(f"{path}: empty dataset")
    if label_column not in header:
        raise FormatError(f"{path}: missing label column {label_column!r}")

    for line, cells in rows:
        for name, cell in zip(header, cells):
            if _is_missing(cell):
                raise FormatError(
                    f"{path}: line {line}: missing value in column {name!r}"
                )

    label_pos = header.index(label_column)
    if schema is None:
        feature_names = [name for name in header if name != label_column]
        if not feature_names:
            raise FormatError(f"{path}: no feature columns besides the label")
        positions = _column_positions(header, feature_names, path)
        columns = [[cells[p] for _, cells in rows] for p in positions]
        features = []
        for name, column in zip(feature_names, columns):
            reals = [_as_real(cell) for cell in column]
            if all(x is not None for x in reals):
                features.append(FeatureSpec.real(name))
            else:
                seen: list[str] = []
                for cell in column:
                    value = _as_name(cell)
                    if value not in seen:
                        seen.append(value)
                if len(seen) < 2:
                    raise ValidationError(
                        f"{path}: column {name!r} is constant; cannot infer a "
                        "categorical domain, declare a schema instead"
                    )
                features.append(FeatureSpec.categorical(name, seen))
        schema = FeatureSchema(tuple(features))
    else:
        positions = _column_positions(header, list(schema.names), path)
        extra = [
            name
            for name in header
            if name not in schema.names and name != label_column
        ]
        if extra:
            raise FormatError(f"{path}: unexpected columns {extra!r}")

    if label_space is None:
        seen_labels: list[str] = []
        for _, cells in rows:
            name = _as_name(cells[label_pos])
            if name not in seen_labels:
                seen_labels.append(name)
        if len(seen_labels) < 2:
            raise ValidationError(
                f"{path}: need at least 2 distinct labels, found {seen_labels!r}"
            )
        label_space = LabelSpace(tuple(seen_labels))

    instances_labels = []
    for line, cells in rows:
        values: list[int | float] = []
        for spec, p in zip(schema.features, positions):
            cell = cells[p]
            if spec.is_categorical:
                name = _as_name(cell)
                if name not in spec.values:
                    raise ValidationError(
                        f"{path}: line {line}: value {name!r} is not among the "
                        f"declared values of feature {spec.name!r}"
                    )
                values.append(spec.values.index(name))
            else:
                x = _as_real(cell)
                if x is None:
                    raise ValidationError(
                        f"{path}: line {line}: cannot read {cell!r} as a finite "
                        f"real number for feature {spec.name!r}"
                    )
                values.append(x)
        label_name = _as_name(cells[label_pos])
        if label_name not in label_space.labels:
            raise ValidationError(
                f"{path}: line {line}: unknown label {label_name!r}"
            )
        instances_labels.append((tuple(values), label_space.index(label_name)))

    dataset = LabeledDataset(schema, label_space, tuple(instances_labels))
    report = validate_dataset(dataset)
    if not report.ok:
        v = report.violations[0]
        raise ValidationError(f"{path}: row {v.row}: {v.reason}")
    return dataset


def load_instances(
    path: PathLike,
    schema: FeatureSchema,
    format: str = "csv",
    label_column: str | None = None,
) -> list[Instance]:
    """Read unlabeled instances for prediction, matching columns by name.

    A column named label_column is ignored when present; any other column
    outside the schema is an error.
    """
    header, rows = _read_table(path, format)
    if not rows:
        raise FormatError(f"{path}: empty dataset")
    positions = _column_positions(header, list(schema.names), path)
    extra = [
        name
        for name in header
        if name not in schema.names and name != label_column
    ]
    if extra:
        raise FormatError(f"{path}: unexpected columns {extra!r}")
    instances = []
    for line, cells in rows:
        values: list[int | float] = []
        for spec, p in zip(schema.features, positions):
            cell = cells[p]
            if _is_missing(cell):
                raise FormatError(
                    f"{path}: line {line}: missing value in column {spec.name!r}"
                )
            if spec.is_categorical:
                name = _as_name(cell)
                if name not in spec.values:
                    raise ValidationError(
                        f"{path}: line {line}: value {name!r} is not among the "
                        f"declared values of feature {spec.name!r}"
                    )
                values.append(spec.values.index(name))
            else:
                x = _as_real(cell)
                if x is None:
                    raise ValidationError(
                        f"{path}: line {line}: cannot read {cell!r} as a finite "
                        f"real number for feature {spec.name!r}"
                    )
                values.append(x)
        instances.append(tuple(values))
    return instances


def save_dataset(
    dataset: LabeledDataset,
    path: PathLike,
    format: str = "csv",
    label_column: str = "label",
) -> None:
    """Write a labeled dataset as CSV or JSONL with values as names."""
    names = dataset.schema.names
    if label_column in names:
        raise ValueError(f"label column {label_column!r} collides with a feature")

    def cell(spec: FeatureSpec, value) -> str | float:
        if spec.is_categorical:
            return spec.values[int(value)]
        return float(value)

    if format == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(list(names) + [label_column])
            for instance, label in dataset.rows:
                out = [
                    str(cell(spec, v))
                    for spec, v in zip(dataset.schema.features, instance)
                ]
                out.append(dataset.label_space.labels[label])
                writer.writerow(out)
    elif format == "jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for instance, label in dataset.rows:
                obj = {
                    spec.name: cell(spec, v)
                    for spec, v in zip(dataset.schema.features, instance)
                }
                obj[label_column] = dataset.label_space.labels[label]
                fh.write(json.dumps(obj))
                fh.write("\n")
    else:
        raise ValueError(f"unknown dataset format {format!r} (use 'csv' or 'jsonl')")
