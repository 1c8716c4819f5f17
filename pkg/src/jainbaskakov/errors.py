"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the mathematical domain (x < 0, invalid parameters, ...)."""


class ThresholdError(DomainError):
    """A moment/operator formula was requested below its n > (j+1)c threshold."""


class IntegrabilityError(ThresholdError):
    """Kernel integral of a growth-degree-d function needs n > (d+1)c."""


class ConvergenceError(RuntimeError):
    """Adaptive series or quadrature failed to reach its tolerance in budget."""


class UnboundedFunctionError(ValueError):
    """A sup-norm computation was requested for a function without a bound."""


class GridEvalError(RuntimeError):
    """One or more points of a grid evaluation failed.

    Carries ``failures``, a list of ``(index, exception)`` pairs, so callers
    can report which points were bad.
    """

    def __init__(self, failures):
        self.failures = list(failures)
        idx = ", ".join(str(i) for i, _ in self.failures)
        first = self.failures[0][1] if self.failures else None
        super().__init__(f"evaluation failed at point indices [{idx}]: {first}")
