"""Exception hierarchy shared across the package."""


class BayesKitError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(BayesKitError):
    """A schema, instance, dataset, or distribution violates its contract."""


class EstimationError(BayesKitError):
    """Estimation preconditions are not met (empty data, empty classes)."""


class InferenceError(BayesKitError):
    """A query has no defined answer, e.g. a zero-probability instance."""


class FormatError(BayesKitError):
    """A serialized container is missing, malformed, or unsupported."""
