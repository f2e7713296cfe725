"""Package-level exception types."""


class NumericalError(RuntimeError):
    """A numerical routine produced non-finite or otherwise unusable values."""
