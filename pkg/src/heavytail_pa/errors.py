"""Exception types shared across the package."""


class HeavytailError(Exception):
    """Base class for all package errors."""


class InvalidParams(HeavytailError):
    """A model-parameter constraint is violated."""


class DegenerateTail(HeavytailError):
    """A marginal power law is not asserted for these parameters.

    The growth model itself is still well defined; only the tail
    analytics refuse to run.
    """


class InvalidSeed(HeavytailError):
    """The requested seed graph cannot start the growth dynamics."""


class ResourceLimit(HeavytailError):
    """A requested size exceeds the configured memory budget."""


class EmptyInput(HeavytailError):
    """An operation received an empty table or sample."""


class InsufficientData(HeavytailError):
    """Too few observations or support points for the estimator."""


class NonPositiveSample(HeavytailError):
    """Tail estimation requires strictly positive samples."""


class DegenerateTailSample(HeavytailError):
    """All order-statistic ratios are 1; the tail index is undefined."""


class QuadratureFailure(HeavytailError):
    """Numerical integration did not reach the requested tolerance."""


class DomainError(HeavytailError):
    """An evaluation point lies outside the mathematical domain."""


class InsufficientExceedances(HeavytailError):
    """Too few points above the radius threshold for an angular histogram."""


class InvalidK(HeavytailError):
    """The derivative order k must exceed alpha_in - 1."""


class SupportExceeded(HeavytailError):
    """An evaluation needs atoms beyond the stored support."""
