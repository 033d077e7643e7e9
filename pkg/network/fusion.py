"""
Fusion model: multiplicative interaction of the representation with the
four scene-condition codes.

    beta = out.weight (feature a * glasses code * head code * mouth code * eye code) + out.bias
    v    = softmax(beta)

All five projections map into the common width d; the element-wise product
lives in R^d, the output map takes d -> M and its bias is in R^M.
"""

from dataclasses import dataclass

import numpy as np

from layers import softmax, softmax_backward
from network.model import Network
from network.scene import flatten_representation
from network.schema import SCENE_KINDS, SceneCodes
from tensorCore import ShapeError, Tensor, ewise_mul

FEATURE = "feature"


@dataclass(frozen=True)
class FusionCache:
    a_flat: Tensor
    codes: SceneCodes
    projections: tuple[Tensor, ...]
    product: Tensor
    beta: Tensor
    v: Tensor


def _project(weight: Tensor, x: Tensor) -> Tensor:
    return Tensor._wrap(weight.array @ x.array)


def fuse(a: Tensor, codes: SceneCodes, net: Network) -> tuple[Tensor, FusionCache]:
    """Condition-adaptive representation v in R^M (a probability vector)."""
    a_flat = flatten_representation(a, net)
    projections = [_project(net["fusion.feature.weight"], a_flat)]
    for kind, code in codes.items():
        projections.append(_project(net[f"fusion.{kind.value}.weight"], code))

    product = projections[0]
    for p in projections[1:]:
        product = ewise_mul(product, p)

    out = net.dense("fusion.out")
    beta = Tensor._wrap(out.weight.array @ product.array + out.bias.array)
    v = softmax(beta)
    return v, FusionCache(a_flat, codes, tuple(projections), product, beta, v)


def fuse_backward(
    d_v: Tensor, net: Network, cache: FusionCache
) -> tuple[Tensor, dict[str, Tensor]]:
    """Cotangent of the flat representation and gradients of every fusion.* parameter."""
    if d_v.shape != cache.v.shape:
        raise ShapeError(f"fuse_backward: d_v {list(d_v.shape)} != v {list(cache.v.shape)}")
    d_beta = softmax_backward(cache.v, d_v).array
    w_fu = net["fusion.out.weight"].array
    grads = {
        "fusion.out.weight": Tensor._wrap(np.outer(d_beta, cache.product.array)),
        "fusion.out.bias": Tensor._wrap(d_beta.copy()),
    }
    d_product = w_fu.T @ d_beta

    factors = [p.array for p in cache.projections]
    inputs = [cache.a_flat] + [code for _, code in cache.codes.items()]
    names = [FEATURE] + [kind.value for kind in SCENE_KINDS]
    d_a = None
    for i, (name, x) in enumerate(zip(names, inputs)):
        others = np.ones_like(d_product)
        for j, f in enumerate(factors):
            if j != i:
                others = others * f
        d_proj = d_product * others
        grads[f"fusion.{name}.weight"] = Tensor._wrap(np.outer(d_proj, x.array))
        if name == FEATURE:
            d_a = Tensor._wrap(net["fusion.feature.weight"].array.T @ d_proj)
    return d_a, grads
