"""Exception taxonomy shared across the package."""


class RdRobinError(Exception):
    """Base class for all package errors."""


class InvalidCoefficientError(RdRobinError):
    """Robin coefficient out of range (must be nonnegative)."""


class SingularSystemError(RdRobinError):
    """Boundary coefficient 0 makes the discrete operator singular."""


class ConvergenceError(RdRobinError):
    """Iterative solver exhausted its iteration budget.

    Carries the last iterate so callers can inspect how far it got.
    """

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class BracketError(RdRobinError):
    """Root bracketing failed (sign condition not met below the cap)."""


class HypothesisViolationError(RdRobinError):
    """A structural precondition on the reaction terms does not hold."""


class ParameterOrderError(RdRobinError):
    """Scalar parameters supplied in the wrong order (e.g. alpha <= k)."""


class DegenerateArgumentError(RdRobinError):
    """A ratio a/f(a) is undefined: some function value is not positive."""


class ConcavityViolationError(RdRobinError):
    """A sampled second difference is nonnegative where concavity is required.

    ``witness`` is a (label, s, value) triple locating the violation.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class GridMismatchError(RdRobinError):
    """Fields that must share a grid do not."""


class ParameterRegimeError(RdRobinError):
    """(lambda, mu) outside the regime required by a construction."""


class RegionExceededError(RdRobinError):
    """A constructed field leaves the radius where its expansion is valid."""


class ConstructionFailureError(RdRobinError):
    """A ladder search ended without a verified sub/supersolution.

    ``report`` optionally carries the last verification report.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class MonotonicityBreachError(RdRobinError):
    """Monotone iteration produced an iterate moving the wrong way."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class NonConvergenceError(RdRobinError):
    """Monotone iteration hit its cap or diverged; carries the trace."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class ConfigError(RdRobinError):
    """Malformed run configuration; message names the offending field."""
