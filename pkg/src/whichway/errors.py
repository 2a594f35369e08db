"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition, invariant, or config schema."""


class NumericFailure(ArithmeticError):
    """A computation produced values outside numeric tolerances (non-finite,
    or negative intensity beyond the clamp window)."""
