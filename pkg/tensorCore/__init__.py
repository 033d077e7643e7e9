"""
Tensor core: immutable float64 tensors and the primitive arithmetic used by
layers, network, training and the data pipeline.
"""

from tensorCore.errors import (
    EmptyTensorError,
    GeometryError,
    NonFiniteError,
    OneHotError,
    ShapeError,
    TensorError,
)
from tensorCore.schema import DomainModel
from tensorCore.tensor import (
    Shape,
    Tensor,
    argmax,
    ewise_mul,
    matmul,
    reduce_sum,
    reshape,
)

__all__ = [
    "DomainModel",
    "Shape",
    "Tensor",
    "matmul",
    "ewise_mul",
    "reshape",
    "reduce_sum",
    "argmax",
    "TensorError",
    "ShapeError",
    "GeometryError",
    "NonFiniteError",
    "OneHotError",
    "EmptyTensorError",
]
