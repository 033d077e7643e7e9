"""
Errors raised by tensor operations and the layers built on them.

All subclass ValueError so callers can treat any malformed-input failure the
same way (the cli maps them to the data-error exit code).
"""


class TensorError(ValueError):
    """Base class for tensor-level failures."""


class ShapeError(TensorError):
    """Operand shapes do not conform (matmul inner extents, element counts, channels)."""


class GeometryError(TensorError):
    """Layer geometry is not integral (kernel larger than input, stride does not divide)."""


class NonFiniteError(TensorError):
    """A NaN or Inf reached an operation that requires finite input."""


class OneHotError(TensorError):
    """A label vector is not a valid one-hot (exactly one 1, rest 0)."""


class EmptyTensorError(TensorError):
    """An operation that needs at least one element got none."""
