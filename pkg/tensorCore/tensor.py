"""
Dense N-dimensional float64 tensor and the arithmetic every other package uses.

Storage is a row-major numpy array that is frozen (read-only) on construction,
so a Tensor behaves as a value: operations return new tensors and never
mutate their inputs.
"""

import hashlib
from typing import Iterable, Sequence

import numpy as np

from tensorCore.errors import EmptyTensorError, NonFiniteError, ShapeError

DTYPE = np.float64


class Shape(tuple):
    """Ordered positive extents, e.g. (channels, depth, height, width)."""

    def __new__(cls, dims: Iterable[int]) -> "Shape":
        extents = tuple(int(d) for d in dims)
        if not extents:
            raise ShapeError("shape needs at least one extent")
        if any(d < 1 for d in extents):
            if any(d == 0 for d in extents):
                raise EmptyTensorError(f"shape {list(extents)} has no elements")
            raise ShapeError(f"negative extent in shape {list(extents)}")
        return super().__new__(cls, extents)

    @property
    def size(self) -> int:
        n = 1
        for d in self:
            n *= d
        return n

    @property
    def rank(self) -> int:
        return len(self)

    def __repr__(self) -> str:
        return f"Shape({list(self)})"


def _freeze(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


class Tensor:
    """
    Immutable dense tensor of 64-bit reals.

    - shape: Shape of the tensor; element count equals len(data).
    - array: read-only numpy view, row-major (C order).
    """

    __slots__ = ("_array",)

    def __init__(self, data: object, shape: Sequence[int] | None = None):
        array = np.array(data, dtype=DTYPE, order="C")
        if array.ndim == 0:
            array = array.reshape(1)
        if shape is not None:
            target = Shape(shape)
            if array.size != target.size:
                raise ShapeError(
                    f"{array.size} values do not fill shape {list(target)}"
                )
            array = array.reshape(target)
        Shape(array.shape)
        self._array = _freeze(array)

    @classmethod
    def _wrap(cls, array: np.ndarray) -> "Tensor":
        """Adopt a freshly computed array without copying it."""
        if array.dtype != DTYPE or not array.flags.c_contiguous:
            array = np.ascontiguousarray(array, dtype=DTYPE)
        if array.ndim == 0:
            array = array.reshape(1)
        Shape(array.shape)
        out = cls.__new__(cls)
        out._array = _freeze(array)
        return out

    @classmethod
    def zeros(cls, shape: Sequence[int]) -> "Tensor":
        return cls._wrap(np.zeros(Shape(shape), dtype=DTYPE))

    @classmethod
    def ones(cls, shape: Sequence[int]) -> "Tensor":
        return cls._wrap(np.ones(Shape(shape), dtype=DTYPE))

    @classmethod
    def full(cls, shape: Sequence[int], value: float) -> "Tensor":
        return cls._wrap(np.full(Shape(shape), value, dtype=DTYPE))

    @classmethod
    def uniform(
        cls, shape: Sequence[int], bound: float, rng: np.random.Generator
    ) -> "Tensor":
        """Values drawn from uniform(-bound, bound) with the caller's generator."""
        return cls._wrap(rng.uniform(-bound, bound, size=Shape(shape)))

    @property
    def shape(self) -> Shape:
        return Shape(self._array.shape)

    @property
    def size(self) -> int:
        return self._array.size

    @property
    def rank(self) -> int:
        return self._array.ndim

    @property
    def array(self) -> np.ndarray:
        return self._array

    def numpy(self) -> np.ndarray:
        """Writable copy of the data."""
        return self._array.copy()

    def tolist(self) -> list:
        return self._array.tolist()

    def is_finite(self) -> bool:
        return bool(np.isfinite(self._array).all())

    def require_finite(self, what: str = "tensor") -> "Tensor":
        if not self.is_finite():
            raise NonFiniteError(f"{what} contains NaN or Inf")
        return self

    def equals(self, other: "Tensor") -> bool:
        """Bitwise equality of shape and data."""
        return (
            self._array.shape == other._array.shape
            and self._array.tobytes() == other._array.tobytes()
        )

    def checksum(self) -> str:
        digest = hashlib.sha256()
        digest.update(np.asarray(self._array.shape, dtype="<u4").tobytes())
        digest.update(self._array.astype("<f8").tobytes())
        return digest.hexdigest()

    def __add__(self, other: "Tensor") -> "Tensor":
        _require_same_shape(self, other, "add")
        return Tensor._wrap(self._array + other._array)

    def __sub__(self, other: "Tensor") -> "Tensor":
        _require_same_shape(self, other, "subtract")
        return Tensor._wrap(self._array - other._array)

    def scale(self, factor: float) -> "Tensor":
        return Tensor._wrap(self._array * float(factor))

    def __len__(self) -> int:
        return self._array.shape[0]

    def __repr__(self) -> str:
        return f"Tensor(shape={list(self.shape)}, data={np.array2string(self._array, threshold=8)})"


def as_tensor(value: Tensor | object) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def _require_same_shape(a: Tensor, b: Tensor, op: str) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"{op}: shapes {list(a.shape)} and {list(b.shape)} differ")


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """
    Matrix product of rank-2 tensors [m,k] x [k,n] -> [m,n].

    Accumulates over k in increasing order, one rank-1 update at a time, so
    every entry equals the naive loop sum(a[i,p]*b[p,j] for p in range(k))
    bit for bit.
    """
    a, b = as_tensor(a), as_tensor(b)
    if a.rank != 2 or b.rank != 2:
        raise ShapeError(
            f"matmul needs rank-2 operands, got {list(a.shape)} and {list(b.shape)}"
        )
    m, k = a.shape
    k2, n = b.shape
    if k != k2:
        raise ShapeError(
            f"matmul inner extents differ: {list(a.shape)} x {list(b.shape)}"
        )
    left, right = a.array, b.array
    out = np.zeros((m, n), dtype=DTYPE)
    for p in range(k):
        out += left[:, p : p + 1] * right[p : p + 1, :]
    return Tensor._wrap(out)


def ewise_mul(a: Tensor, b: Tensor) -> Tensor:
    """Element-wise product of identically shaped tensors."""
    a, b = as_tensor(a), as_tensor(b)
    _require_same_shape(a, b, "ewise_mul")
    return Tensor._wrap(a.array * b.array)


def reshape(t: Tensor, shape: Sequence[int]) -> Tensor:
    """Same row-major data sequence under a new shape."""
    t = as_tensor(t)
    target = Shape(shape)
    if target.size != t.size:
        raise ShapeError(
            f"cannot reshape {list(t.shape)} ({t.size} elements) to {list(target)}"
        )
    return Tensor._wrap(t.array.reshape(target).copy())


def reduce_sum(t: Tensor) -> float:
    """Sequential left-to-right sum of all elements in row-major order."""
    flat = as_tensor(t).array.ravel()
    return float(np.cumsum(flat)[-1])


def argmax(t: Tensor | Sequence[float]) -> int:
    """Index of the maximum of a rank-1 tensor; ties go to the lowest index."""
    values = t.array if isinstance(t, Tensor) else np.asarray(t, dtype=DTYPE)
    if values.size == 0:
        raise EmptyTensorError("argmax of an empty tensor")
    if values.ndim != 1:
        raise ShapeError(f"argmax needs a rank-1 tensor, got {list(values.shape)}")
    return int(np.argmax(values))
