"""
Multiply-accumulate accounting for one forward pass.

Conv layer i costs D'_i H'_i W'_i * C_out * C_in * D_r H_r W_r (the sum over
layers of output volume times kernel volume); a dense stage costs in * out
(N^2 C for the two-layer heads); fusion costs its five projections, the
d-wide four-way products and the d -> M output map.
"""

from pydantic import BaseModel, Field

from layers.conv import conv3d_output_shape
from network.model import DETECTOR_UNITS
from network.schema import SCENE_KINDS, NetworkConfig, code_length


class LayerCost(BaseModel):
    name: str
    macs: int = Field(ge=0)


class CostReport(BaseModel):
    layers: list[LayerCost]

    def total(self, prefix: str = "") -> int:
        return sum(layer.macs for layer in self.layers if layer.name.startswith(prefix))


def operation_counts(config: NetworkConfig) -> CostReport:
    layers: list[LayerCost] = []
    shape = config.input_shape
    in_ch = config.channels
    shapes = config.layer_shapes()
    for i, (out_ch, kernel) in enumerate(zip(config.conv_channels, config.conv_kernels), start=1):
        _, od, oh, ow = conv3d_output_shape(shape, (out_ch, in_ch, *kernel), (1, 1, 1))
        volume = kernel[0] * kernel[1] * kernel[2]
        layers.append(LayerCost(name=f"rep.conv{i}", macs=od * oh * ow * out_ch * in_ch * volume))
        shape = shapes[i - 1]
        in_ch = out_ch

    n_a = config.representation_size
    h1, h2 = config.head_hidden
    for kind in SCENE_KINDS:
        widths = [n_a, h1, h2, code_length(kind)]
        for stage, (n_in, n_out) in zip(("h1", "h2", "out"), zip(widths, widths[1:])):
            layers.append(LayerCost(name=f"head.{kind.value}.{stage}", macs=n_in * n_out))

    d, m = config.fusion_width, config.fusion_out
    layers.append(LayerCost(name="fusion.feature", macs=d * n_a))
    for kind in SCENE_KINDS:
        layers.append(LayerCost(name=f"fusion.{kind.value}", macs=d * code_length(kind)))
    layers.append(LayerCost(name="fusion.product", macs=4 * d))
    layers.append(LayerCost(name="fusion.out", macs=m * d))

    layers.append(LayerCost(name="detector.hidden", macs=m * config.detector_hidden))
    layers.append(LayerCost(name="detector.out", macs=config.detector_hidden * DETECTOR_UNITS))
    return CostReport(layers=layers)
