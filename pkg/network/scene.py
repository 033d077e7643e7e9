"""
Scene-understanding heads: glasses/illumination, head, mouth, eye.

Each head is o = W_o relu(W_h2 relu(W_h1 a + b_h1) + b_h2) + b_o over the
flattened representation; the four heads share a and nothing else.
"""

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from layers import StackCache, dense_stack_backward, dense_stack_forward
from network.model import Network, head_group
from network.schema import SCENE_KINDS, LabelKind
from tensorCore import ShapeError, Tensor, reshape


@dataclass(frozen=True)
class SceneCache:
    a_flat: Tensor
    stacks: dict[LabelKind, StackCache]


def flatten_representation(a: Tensor, net: Network) -> Tensor:
    n_a = net.config.representation_size
    if a.size != n_a:
        raise ShapeError(
            f"representation has {a.size} values, network expects {n_a} "
            f"({list(net.config.representation_shape)})"
        )
    return a if a.rank == 1 else reshape(a, [n_a])


def scene_forward(a: Tensor, net: Network) -> tuple[dict[LabelKind, Tensor], SceneCache]:
    """Logits of the four heads, lengths (5, 3, 3, 2)."""
    a_flat = flatten_representation(a, net)
    logits, stacks = {}, {}
    for kind in SCENE_KINDS:
        logits[kind], stacks[kind] = dense_stack_forward(a_flat, net.head_stages(kind))
    return logits, SceneCache(a_flat=a_flat, stacks=stacks)


def scene_backward(
    d_logits: Mapping[LabelKind, Tensor], net: Network, cache: SceneCache
) -> tuple[Tensor, dict[str, Tensor]]:
    """Cotangent of the flat representation (summed over heads) and head gradients."""
    grads: dict[str, Tensor] = {}
    d_a = np.zeros(cache.a_flat.size)
    for kind in SCENE_KINDS:
        d_in, stage_grads = dense_stack_backward(
            d_logits[kind], net.head_stages(kind), cache.stacks[kind]
        )
        d_a += d_in.array
        for stage, layer in zip(("h1", "h2", "out"), stage_grads):
            prefix = f"{head_group(kind)}.{stage}"
            grads[f"{prefix}.weight"] = layer.d_params["weight"]
            grads[f"{prefix}.bias"] = layer.d_params["bias"]
    return Tensor._wrap(d_a), grads
