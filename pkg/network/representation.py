"""
Representation learner: six valid 3D convolutions with ReLU, max pooling
after the configured layers. Its output a is the spatio-temporal
representation shared by the scene heads and the fusion model.
"""

from dataclasses import dataclass

import numpy as np

from layers import conv3d, conv3d_backward, maxpool3d, maxpool3d_backward, relu, relu_backward
from network.model import Network
from tensorCore import ShapeError, Tensor


@dataclass(frozen=True)
class RepCache:
    inputs: tuple[Tensor, ...]
    pre_activations: tuple[Tensor, ...]
    activations: tuple[Tensor, ...]
    pool_maps: tuple[np.ndarray | None, ...]


def rep_forward(clip: Tensor, net: Network) -> tuple[Tensor, RepCache]:
    """Clip [C, T, H, W] -> representation [C_a, D_a, H_a, W_a] plus backward cache."""
    config = net.config
    if clip.shape != config.input_shape:
        raise ShapeError(
            f"clip shape {list(clip.shape)} does not match network input {list(config.input_shape)}"
        )
    inputs, pre, acts, maps = [], [], [], []
    h = clip
    for i in range(1, len(config.conv_channels) + 1):
        inputs.append(h)
        z = conv3d(h, net.conv(i))
        pre.append(z)
        h = relu(z)
        acts.append(h)
        if i in config.pool_after:
            h, index_map = maxpool3d(h, config.pool_window)
            maps.append(index_map)
        else:
            maps.append(None)
    return h, RepCache(tuple(inputs), tuple(pre), tuple(acts), tuple(maps))


def rep_backward(d_a: Tensor, net: Network, cache: RepCache) -> dict[str, Tensor]:
    """Gradients of all rep.* parameters given the cotangent of the representation."""
    grads: dict[str, Tensor] = {}
    g = d_a
    for i in reversed(range(len(cache.inputs))):
        if cache.pool_maps[i] is not None:
            g = maxpool3d_backward(g, cache.pool_maps[i], cache.activations[i].shape)
        g = relu_backward(cache.pre_activations[i], g)
        layer = conv3d_backward(cache.inputs[i], net.conv(i + 1), g)
        grads[f"rep.conv{i + 1}.kernels"] = layer.d_params["kernels"]
        grads[f"rep.conv{i + 1}.bias"] = layer.d_params["bias"]
        g = layer.d_input
    return grads
