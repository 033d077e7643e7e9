"""
Differentiable layer primitives: 3D convolution, 3D max pooling, ReLU, dense,
softmax and softmax cross-entropy, each with an analytic backward pass.
"""

from layers.activations import (
    one_hot_index,
    relu,
    relu_backward,
    softmax,
    softmax_backward,
    softmax_cross_entropy,
)
from layers.conv import (
    conv3d,
    conv3d_backward,
    conv3d_output_shape,
    maxpool3d,
    maxpool3d_backward,
    maxpool3d_output_shape,
)
from layers.dense import (
    StackCache,
    dense,
    dense_backward,
    dense_stack_backward,
    dense_stack_forward,
)
from layers.schema import Conv3dParams, DenseParams, LayerGrad

__all__ = [
    "Conv3dParams",
    "DenseParams",
    "LayerGrad",
    "conv3d",
    "conv3d_backward",
    "conv3d_output_shape",
    "maxpool3d",
    "maxpool3d_backward",
    "maxpool3d_output_shape",
    "relu",
    "relu_backward",
    "dense",
    "dense_backward",
    "dense_stack_forward",
    "dense_stack_backward",
    "StackCache",
    "softmax",
    "softmax_backward",
    "softmax_cross_entropy",
    "one_hot_index",
]
