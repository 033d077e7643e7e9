"""
Detection model on top of the fusion output: one ReLU hidden layer and
two output units (non-drowsy, drowsy).
"""

from layers import StackCache, dense_stack_backward, dense_stack_forward, softmax
from network.model import Network
from tensorCore import ShapeError, Tensor


def detect(v: Tensor, net: Network) -> tuple[Tensor, StackCache]:
    """Two detector logits; softmax of them gives the drowsiness likelihood."""
    if v.shape != (net.config.fusion_out,):
        raise ShapeError(f"detector input {list(v.shape)} != ({net.config.fusion_out},)")
    return dense_stack_forward(v, net.detector_stages())


def detect_probabilities(logits: Tensor) -> Tensor:
    return softmax(logits)


def detect_backward(
    d_logits: Tensor, net: Network, cache: StackCache
) -> tuple[Tensor, dict[str, Tensor]]:
    d_v, stage_grads = dense_stack_backward(d_logits, net.detector_stages(), cache)
    grads = {}
    for stage, layer in zip(("hidden", "out"), stage_grads):
        grads[f"detector.{stage}.weight"] = layer.d_params["weight"]
        grads[f"detector.{stage}.bias"] = layer.d_params["bias"]
    return d_v, grads
