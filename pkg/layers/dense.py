"""
Fully connected layers and ReLU stacks of them.

A stack is a list of DenseParams; every stage but the last is followed by a
ReLU, the last stage is linear (losses apply softmax themselves).
"""

from dataclasses import dataclass

import numpy as np

from layers.activations import relu, relu_backward
from layers.schema import DenseParams, LayerGrad
from tensorCore import ShapeError, Tensor


def _check_input(input: Tensor, p: DenseParams) -> None:
    if input.rank != 1 or input.shape[0] != p.in_features:
        raise ShapeError(
            f"dense input {list(input.shape)} does not match weight {list(p.weight.shape)}"
        )


def dense(input: Tensor, p: DenseParams) -> Tensor:
    """weight . input + bias"""
    _check_input(input, p)
    return Tensor._wrap(p.weight.array @ input.array + p.bias.array)


def dense_backward(input: Tensor, p: DenseParams, d_output: Tensor) -> LayerGrad:
    _check_input(input, p)
    if d_output.shape != (p.out_features,):
        raise ShapeError(
            f"dense_backward: d_output {list(d_output.shape)} != ({p.out_features},)"
        )
    g = d_output.array
    return LayerGrad(
        d_input=Tensor._wrap(p.weight.array.T @ g),
        d_params={
            "weight": Tensor._wrap(np.outer(g, input.array)),
            "bias": Tensor._wrap(g.copy()),
        },
    )


@dataclass(frozen=True)
class StackCache:
    """Stage inputs and pre-activations recorded on the forward pass."""

    inputs: tuple[Tensor, ...]
    pre_activations: tuple[Tensor, ...]


def dense_stack_forward(
    input: Tensor, stages: list[DenseParams]
) -> tuple[Tensor, StackCache]:
    inputs, pre = [], []
    h = input
    for i, stage in enumerate(stages):
        inputs.append(h)
        z = dense(h, stage)
        pre.append(z)
        h = z if i == len(stages) - 1 else relu(z)
    return h, StackCache(inputs=tuple(inputs), pre_activations=tuple(pre))


def dense_stack_backward(
    d_output: Tensor, stages: list[DenseParams], cache: StackCache
) -> tuple[Tensor, list[LayerGrad]]:
    """Returns the input cotangent and per-stage gradients in stage order."""
    grads: list[LayerGrad] = [None] * len(stages)  # type: ignore[list-item]
    g = d_output
    for i in reversed(range(len(stages))):
        if i != len(stages) - 1:
            g = relu_backward(cache.pre_activations[i], g)
        grads[i] = dense_backward(cache.inputs[i], stages[i], g)
        g = grads[i].d_input
    return g, grads
