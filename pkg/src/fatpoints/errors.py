"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """Bad weights, points, ranges or field choices supplied by the caller."""


class InvariantViolation(RuntimeError):
    """A checked mathematical invariant failed; indicates a bug, not bad input."""
