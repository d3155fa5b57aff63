"""Exception types shared across modules."""


class SandwichError(Exception):
    """Base class for all package errors."""


class GridMismatchError(SandwichError, ValueError):
    """Two fields live on different grids."""


class DomainError(SandwichError, ValueError):
    """Fractional power of a nonpositive value was requested."""


class LambdaOutOfRangeError(SandwichError, ValueError):
    """Coupling outside the half-open range [0, lambda_max)."""

    def __init__(self, lam, lambda_max):
        self.lam = lam
        self.lambda_max = lambda_max
        super().__init__(f"lambda={lam!r} outside [0, {lambda_max!r})")


class HypothesisFailure(SandwichError):
    """Hypotheses required by the solver do not hold; carries the report."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"hypotheses failed: {report.failed_checks()}")


class ConvergenceError(SandwichError):
    """Iteration budget exhausted; ``result`` holds the partial trace."""

    def __init__(self, message, result=None):
        self.result = result
        super().__init__(message)


class IterationFailure(SandwichError):
    """Inverse iteration for the ground state did not settle."""


class ConfigError(SandwichError, ValueError):
    """Configuration file could not be parsed or validated."""


class SweepError(SandwichError):
    """A solve inside a lambda sweep failed; ``lam`` names the coupling."""

    def __init__(self, lam, cause):
        self.lam = lam
        self.cause = cause
        super().__init__(f"lambda={lam!r}: {type(cause).__name__}: {cause}")
