"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """A numeric argument violates a precondition (non-finite, wrong shape, bad sign)."""


class InvalidDirectionError(ValueError):
    """A search direction is unusable (zero vector or nonpositive curvature)."""


class LineSearchFailedError(RuntimeError):
    """A step-size selector could not produce a finite candidate."""


class IncomparableVariantsError(RuntimeError):
    """A variant comparison was requested over missing or non-converged results."""
