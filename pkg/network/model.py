"""
Network: the parameter registry of the four models.

Every learnable tensor is registered once under a stable dotted name:

- rep.conv{1..6}.kernels / .bias                representation learner
- head.{glasses_illum,head,mouth,eye}.{h1,h2,out}.weight / .bias
                                                scene-understanding heads
- fusion.feature.weight                         feature projection (d x |a|)
- fusion.{glasses_illum,head,mouth,eye}.weight  condition projections (d x code length)
- fusion.out.weight / .bias                     output map (M x d) and bias (M)
- detector.{hidden,out}.weight / .bias          detection model

Networks are values: updates produce a new Network sharing unchanged tensors.
"""

import hashlib
import math
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, NamedTuple

import numpy as np

from layers.schema import Conv3dParams, DenseParams
from network.schema import SCENE_KINDS, LabelKind, NetworkConfig, code_length
from tensorCore import ShapeError, Tensor

DETECTOR_UNITS = 2

# Component groups, in registry order.
REP = "rep"
FUSION = "fusion"
DETECTOR = "detector"


def head_group(kind: LabelKind) -> str:
    return f"head.{kind.value}"


COMPONENT_GROUPS: tuple[str, ...] = (
    REP,
    *(head_group(k) for k in SCENE_KINDS),
    FUSION,
    DETECTOR,
)


class ParameterSpec(NamedTuple):
    name: str
    shape: tuple[int, ...]
    fan_in: int
    fan_out: int

    @property
    def is_bias(self) -> bool:
        return self.name.endswith(".bias")


def _dense_specs(prefix: str, n_in: int, n_out: int) -> list[ParameterSpec]:
    return [
        ParameterSpec(f"{prefix}.weight", (n_out, n_in), n_in, n_out),
        ParameterSpec(f"{prefix}.bias", (n_out,), n_in, n_out),
    ]


def parameter_specs(config: NetworkConfig) -> list[ParameterSpec]:
    """Registry layout for a configuration, in initialization order."""
    specs: list[ParameterSpec] = []
    in_ch = config.channels
    for i, (out_ch, kernel) in enumerate(zip(config.conv_channels, config.conv_kernels), start=1):
        volume = kernel[0] * kernel[1] * kernel[2]
        fan_in, fan_out = in_ch * volume, out_ch * volume
        specs.append(ParameterSpec(f"rep.conv{i}.kernels", (out_ch, in_ch, *kernel), fan_in, fan_out))
        specs.append(ParameterSpec(f"rep.conv{i}.bias", (out_ch,), fan_in, fan_out))
        in_ch = out_ch

    n_a = config.representation_size
    h1, h2 = config.head_hidden
    for kind in SCENE_KINDS:
        prefix = head_group(kind)
        specs += _dense_specs(f"{prefix}.h1", n_a, h1)
        specs += _dense_specs(f"{prefix}.h2", h1, h2)
        specs += _dense_specs(f"{prefix}.out", h2, code_length(kind))

    d, m = config.fusion_width, config.fusion_out
    specs.append(ParameterSpec("fusion.feature.weight", (d, n_a), n_a, d))
    for kind in SCENE_KINDS:
        n = code_length(kind)
        specs.append(ParameterSpec(f"fusion.{kind.value}.weight", (d, n), n, d))
    specs += _dense_specs("fusion.out", d, m)

    specs += _dense_specs("detector.hidden", m, config.detector_hidden)
    specs += _dense_specs("detector.out", config.detector_hidden, DETECTOR_UNITS)
    return specs


def group_of(name: str) -> str:
    """Component group of a registry name: rep, head.<kind>, fusion or detector."""
    parts = name.split(".")
    return ".".join(parts[:2]) if parts[0] == "head" else parts[0]


class Network:
    """
    Configuration plus the registry of all parameters of the representation learner, the four heads,
    the fusion model and the detector.
    """

    def __init__(self, config: NetworkConfig, params: Mapping[str, Tensor]):
        specs = parameter_specs(config)
        expected = [s.name for s in specs]
        if set(params) != set(expected):
            missing = sorted(set(expected) - set(params))
            extra = sorted(set(params) - set(expected))
            raise ShapeError(f"registry mismatch: missing {missing}, unexpected {extra}")
        for spec in specs:
            if params[spec.name].shape != spec.shape:
                raise ShapeError(
                    f"{spec.name}: shape {list(params[spec.name].shape)} != {list(spec.shape)}"
                )
        self.config = config
        self._params = MappingProxyType({name: params[name] for name in expected})

    @classmethod
    def initialize(cls, config: NetworkConfig) -> "Network":
        """Glorot-uniform weights, bound sqrt(6 / (fan_in + fan_out)); zero biases."""
        rng = np.random.default_rng(config.seed)
        params = {}
        for spec in parameter_specs(config):
            if spec.is_bias:
                params[spec.name] = Tensor.zeros(spec.shape)
            else:
                bound = math.sqrt(6.0 / (spec.fan_in + spec.fan_out))
                params[spec.name] = Tensor.uniform(spec.shape, bound, rng)
        return cls(config, params)

    @classmethod
    def zeros(cls, config: NetworkConfig) -> "Network":
        return cls(config, {s.name: Tensor.zeros(s.shape) for s in parameter_specs(config)})

    @property
    def params(self) -> Mapping[str, Tensor]:
        return self._params

    def names(self) -> list[str]:
        return list(self._params)

    def __getitem__(self, name: str) -> Tensor:
        return self._params[name]

    def with_params(self, updates: Mapping[str, Tensor]) -> "Network":
        merged = dict(self._params)
        merged.update(updates)
        return Network(self.config, merged)

    def conv(self, index: int) -> Conv3dParams:
        prefix = f"rep.conv{index}"
        return Conv3dParams(
            kernels=self._params[f"{prefix}.kernels"], bias=self._params[f"{prefix}.bias"]
        )

    def dense(self, prefix: str) -> DenseParams:
        return DenseParams(
            weight=self._params[f"{prefix}.weight"], bias=self._params[f"{prefix}.bias"]
        )

    def head_stages(self, kind: LabelKind) -> list[DenseParams]:
        prefix = head_group(kind)
        return [self.dense(f"{prefix}.{stage}") for stage in ("h1", "h2", "out")]

    def detector_stages(self) -> list[DenseParams]:
        return [self.dense("detector.hidden"), self.dense("detector.out")]

    def parameter_count(self) -> int:
        return sum(t.size for t in self._params.values())

    def checksum(self, select: Callable[[str], bool] | None = None) -> str:
        """SHA-256 over (name, shape, bytes) of the selected parameters in registry order."""
        digest = hashlib.sha256()
        for name, tensor in self._params.items():
            if select is None or select(name):
                digest.update(name.encode("utf-8"))
                digest.update(tensor.checksum().encode("ascii"))
        return digest.hexdigest()

    def equals(self, other: "Network") -> bool:
        return self.config == other.config and all(
            self._params[n].equals(other._params[n]) for n in self._params
        )


def in_groups(groups: Iterable[str]) -> Callable[[str], bool]:
    """Parameter filter accepting names whose component group is listed."""
    wanted = frozenset(groups)
    return lambda name: group_of(name) in wanted


def zero_gradients(net: Network, names: Iterable[str] | None = None) -> dict[str, Tensor]:
    selected = net.names() if names is None else list(names)
    return {name: Tensor.zeros(net[name].shape) for name in selected}
