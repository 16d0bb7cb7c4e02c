"""Naive Bayes and exact Bayes-optimal classification on small discrete spaces.

The package pairs a factored (feature-independent-given-class) classifier
with an explicit joint-table oracle on enumerable instance spaces, so
optimal decisions, minimum-risk actions, and the factored model's behaviour
under violated independence can be computed and compared exactly at desk
scale.
"""

from .errors import (
    BayesKitError,
    EstimationError,
    FormatError,
    InferenceError,
    ValidationError,
)
from .schema import (
    FeatureSchema,
    FeatureSpec,
    FiniteDistribution,
    Instance,
    LabeledDataset,
    LabelSpace,
    ValidationReport,
    Violation,
    check_instance,
    validate_dataset,
)
from .estimation import (
    ClassPrior,
    ConditionalTable,
    Gaussian,
    GaussianParams,
    SmoothingConfig,
    count_matching,
    estimate_categorical_conditionals,
    estimate_gaussian,
    estimate_prior,
    indicator,
)
from .naive_bayes import (
    CategoricalLikelihood,
    GaussianLikelihood,
    NaiveBayesModel,
    classify,
    joint_log_score,
    posterior,
    train,
)
from .exact_bayes import (
    JointTable,
    LossMatrix,
    bayes_error,
    classify_min_error,
    classify_min_risk,
    conditional_risk,
    enumerate_instances,
    estimate_joint,
    exact_posterior,
    instance_from_index,
    instance_index,
    param_count,
)
from .independence import (
    IndependenceWitness,
    TripleJoint,
    is_conditionally_independent,
    weather_example,
    with_roles,
)
from .synthetic import (
    ExplicitSpec,
    FactoredSpec,
    GeneratorSpec,
    factored_from_model,
    green_red_dataset,
    mle_concentration_trial,
    naive_model_from_factored,
    sample,
    to_joint,
)
from .evaluation import EvaluationReport, decide, evaluate, posterior_of

__version__ = "0.1.0"

__all__ = [
    "BayesKitError",
    "CategoricalLikelihood",
    "ClassPrior",
    "ConditionalTable",
    "EstimationError",
    "EvaluationReport",
    "ExplicitSpec",
    "FactoredSpec",
    "FeatureSchema",
    "FeatureSpec",
    "FiniteDistribution",
    "FormatError",
    "Gaussian",
    "GaussianLikelihood",
    "GaussianParams",
    "GeneratorSpec",
    "IndependenceWitness",
    "InferenceError",
    "Instance",
    "JointTable",
    "LabelSpace",
    "LabeledDataset",
    "LossMatrix",
    "NaiveBayesModel",
    "SmoothingConfig",
    "TripleJoint",
    "ValidationError",
    "ValidationReport",
    "Violation",
    "bayes_error",
    "check_instance",
    "classify",
    "classify_min_error",
    "classify_min_risk",
    "conditional_risk",
    "count_matching",
    "decide",
    "enumerate_instances",
    "estimate_categorical_conditionals",
    "estimate_gaussian",
    "estimate_joint",
    "estimate_prior",
    "evaluate",
    "exact_posterior",
    "factored_from_model",
    "green_red_dataset",
    "indicator",
    "instance_from_index",
    "instance_index",
    "is_conditionally_independent",
    "joint_log_score",
    "mle_concentration_trial",
    "naive_model_from_factored",
    "param_count",
    "posterior",
    "posterior_of",
    "sample",
    "to_joint",
    "train",
    "validate_dataset",
    "weather_example",
    "with_roles",
]
