"""Plain SGD over the parameter registry, with the per-phase parameter filters."""

from typing import Callable, Mapping

from network.model import COMPONENT_GROUPS, DETECTOR, FUSION, Network, in_groups
from tensorCore import Tensor
from training.schema import Phase

ParamFilter = Callable[[str], bool]

SCENE_PRETRAIN_GROUPS: tuple[str, ...] = tuple(
    g for g in COMPONENT_GROUPS if g not in (FUSION, DETECTOR)
)


class RegistryMismatchError(ValueError):
    """Gradients do not match the network's parameter registry."""


def phase_filter(phase: Phase) -> ParamFilter | None:
    """Phase 1 updates the representation and scene heads; phase 2 updates everything."""
    if phase == Phase.SCENE_PRETRAIN:
        return in_groups(SCENE_PRETRAIN_GROUPS)
    return None


def sgd_step(
    net: Network,
    gradients: Mapping[str, Tensor],
    lr: float,
    select: ParamFilter | None = None,
) -> Network:
    """p <- p - lr * g for every selected parameter; the rest keep their tensors."""
    unknown = sorted(set(gradients) - set(net.params))
    if unknown:
        raise RegistryMismatchError(f"gradients for unknown parameters {unknown}")
    selected = [name for name in net.names() if select is None or select(name)]
    missing = [name for name in selected if name not in gradients]
    if missing:
        raise RegistryMismatchError(f"no gradients for {missing}")
    for name in selected:
        if gradients[name].shape != net[name].shape:
            raise RegistryMismatchError(
                f"{name}: gradient {list(gradients[name].shape)} != parameter {list(net[name].shape)}"
            )
    if lr == 0:
        return net
    updates = {
        name: Tensor._wrap(net[name].array - lr * gradients[name].array) for name in selected
    }
    return net.with_params(updates)
