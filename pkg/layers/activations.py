"""
ReLU, softmax and softmax cross-entropy with their analytic backward passes.
"""

import numpy as np

from tensorCore import NonFiniteError, OneHotError, ShapeError, Tensor


def relu(input: Tensor) -> Tensor:
    return Tensor._wrap(np.maximum(input.array, 0.0))


def relu_backward(input: Tensor, d_output: Tensor) -> Tensor:
    """Pass the cotangent where input > 0; the subgradient at exactly 0 is 0."""
    if input.shape != d_output.shape:
        raise ShapeError(
            f"relu_backward: input {list(input.shape)} != d_output {list(d_output.shape)}"
        )
    return Tensor._wrap(np.where(input.array > 0.0, d_output.array, 0.0))


def _shifted(logits: Tensor, what: str) -> np.ndarray:
    if logits.rank != 1:
        raise ShapeError(f"{what} needs a rank-1 tensor, got {list(logits.shape)}")
    z = logits.array
    if not np.isfinite(z).all():
        raise NonFiniteError(f"{what} input contains NaN or Inf")
    return z - z.max()


def softmax(input: Tensor) -> Tensor:
    """exp(x_i) / sum_j exp(x_j), evaluated after subtracting max(x)."""
    e = np.exp(_shifted(input, "softmax"))
    return Tensor._wrap(e / e.sum())


def softmax_backward(output: Tensor, d_output: Tensor) -> Tensor:
    """Cotangent of the softmax input given its output v: v * (g - <v, g>)."""
    v, g = output.array, d_output.array
    return Tensor._wrap(v * (g - np.dot(v, g)))


def one_hot_index(onehot: Tensor) -> int:
    """Position of the single 1 in a one-hot vector."""
    values = onehot.array
    if onehot.rank != 1:
        raise OneHotError(f"one-hot must be rank 1, got {list(onehot.shape)}")
    hot = np.flatnonzero(values == 1.0)
    if hot.size != 1 or np.count_nonzero(values) != 1:
        raise OneHotError(f"not a one-hot vector: {values.tolist()}")
    return int(hot[0])


def softmax_cross_entropy(logits: Tensor, onehot: Tensor) -> tuple[float, Tensor]:
    """
    Cross-entropy between softmax(logits) and a one-hot target.

    loss = logsumexp(logits) - logits[target]; d_logits = softmax(logits) - onehot.
    """
    if logits.shape != onehot.shape:
        raise ShapeError(
            f"logits {list(logits.shape)} and one-hot {list(onehot.shape)} differ"
        )
    target = one_hot_index(onehot)
    z = _shifted(logits, "softmax_cross_entropy")
    e = np.exp(z)
    total = e.sum()
    loss = float(np.log(total) - z[target])
    d_logits = e / total - onehot.array
    return loss, Tensor._wrap(d_logits)
