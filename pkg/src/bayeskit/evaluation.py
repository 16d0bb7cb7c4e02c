"""Batch evaluation: accuracy, confusion counts, and empirical risk.

Works uniformly over factored models and explicit joint tables. Rows whose
posterior is undefined (zero probability under every class, or zero marginal
mass) are tallied as undecidable instead of aborting the run; accuracy and
the confusion matrix cover the decided rows.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InferenceError, ValidationError
from .exact_bayes import JointTable, LossMatrix, conditional_risk, exact_posterior
from .naive_bayes import NaiveBayesModel, posterior
from .schema import FiniteDistribution, Instance, LabeledDataset

Model = NaiveBayesModel | JointTable


@dataclass(frozen=True)
class EvaluationReport:
    accuracy: float
    confusion: tuple[tuple[int, ...], ...]  # [true label][predicted label]
    empirical_risk: float | None
    undecidable: int

    @property
    def misclassification_rate(self) -> float:
        return 1.0 - self.accuracy


def posterior_of(model: Model, instance: Instance) -> FiniteDistribution:
    """Class posterior for either model kind; raises InferenceError when undefined."""
    if isinstance(model, NaiveBayesModel):
        return posterior(model, instance)
    return exact_posterior(model, instance)


def decide(model: Model, instance: Instance, loss: LossMatrix | None = None) -> int:
    """Decision for one instance: max posterior, or min expected loss if given.

    Ties go to the lowest index in both rules.
    """
    post = posterior_of(model, instance)
    if loss is None:
        return max(range(len(post)), key=lambda k: (post[k], -k))
    if len(loss) != len(post):
        raise ValidationError(
            f"loss matrix size {len(loss)} does not match {len(post)} classes"
        )
    risks = [conditional_risk(post, loss, i) for i in range(len(loss))]
    return min(range(len(risks)), key=lambda i: (risks[i], i))


def _check_compatible(model: Model, dataset: LabeledDataset) -> None:
    if dataset.schema != model.schema:
        raise ValidationError("dataset schema does not match the model schema")
    if dataset.label_space != model.label_space:
        raise ValidationError("dataset labels do not match the model labels")


def evaluate(
    model: Model, dataset: LabeledDataset, loss: LossMatrix | None = None
) -> EvaluationReport:
    """Classify every row and report accuracy, confusion, and risk.

    The confusion matrix is indexed [true][predicted] and its row sums equal
    the per-true-label counts of the decided rows. When a loss matrix is
    supplied, decisions minimize expected loss and empirical_risk is the mean
    incurred loss over decided rows.
    """
    _check_compatible(model, dataset)
    n = len(dataset.label_space)
    if loss is not None and len(loss) != n:
        raise ValidationError(
            f"loss matrix size {len(loss)} does not match {n} classes"
        )
    confusion = [[0] * n for _ in range(n)]
    undecidable = 0
    incurred = 0.0
    for instance, label in dataset.rows:
        try:
            decision = decide(model, instance, loss)
        except InferenceError:
            undecidable += 1
            continue
        confusion[label][decision] += 1
        if loss is not None:
            incurred += loss.entries[decision][label]
    decided = sum(sum(row) for row in confusion)
    correct = sum(confusion[k][k] for k in range(n))
    accuracy = correct / decided if decided else 0.0
    risk = (incurred / decided) if (loss is not None and decided) else (
        0.0 if loss is not None else None
    )
    return EvaluationReport(
        accuracy=accuracy,
        confusion=tuple(tuple(row) for row in confusion),
        empirical_risk=risk,
        undecidable=undecidable,
    )
