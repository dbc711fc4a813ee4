"""Exception types shared across the package."""


class MinmaxLabError(Exception):
    """Base class for all errors raised by minmax_lab."""


class OracleEstimatorError(MinmaxLabError):
    """An estimator is not a data-only decision rule and could depend on the
    unknown parameter."""


class NonPositiveScaleError(MinmaxLabError):
    """Loss scaling factor must be strictly positive (losses form a cone,
    not a vector space)."""


class DegenerateLossError(MinmaxLabError):
    """The loss vanishes somewhere on the classification window, so a
    log-log exponent fit is undefined."""


class QuadratureUnsupportedError(MinmaxLabError):
    """Quadrature needs an exact Gaussian error law; this estimator only
    admits an empirical one."""


class NonFiniteRiskError(MinmaxLabError):
    """A risk evaluation produced a non-finite value."""


class InsufficientLossesError(MinmaxLabError):
    """A comparison report needs at least two losses."""


class InsufficientClassesError(MinmaxLabError):
    """A partition check needs at least two distinct exponent classes."""


class ExponentPreconditionError(MinmaxLabError):
    """The refutation engine requires both local exponents > 1 and clearly
    separated."""


class ConfigError(MinmaxLabError):
    """A run configuration is missing, malformed, or inconsistent."""
