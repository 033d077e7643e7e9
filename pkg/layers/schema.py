"""
Layer parameter and gradient containers.

Conv3dParams: kernels [out_ch, in_ch, D_r, H_r, W_r], bias [out_ch], stride.
DenseParams: weight [out, in], bias [out].
LayerGrad: gradient w.r.t. the layer input plus one tensor per parameter.
"""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from tensorCore import DomainModel, ShapeError, Tensor


class Conv3dParams(DomainModel):
    """3D local receptive field: kernel volume, per-channel bias and stride."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kernels: Tensor
    bias: Tensor
    stride: tuple[int, int, int] = (1, 1, 1)

    @model_validator(mode="after")
    def _check(self) -> "Conv3dParams":
        if self.kernels.rank != 5:
            raise ShapeError(
                f"conv kernels must be [out, in, D, H, W], got {list(self.kernels.shape)}"
            )
        if self.bias.shape != (self.kernels.shape[0],):
            raise ShapeError(
                f"conv bias {list(self.bias.shape)} does not match "
                f"{self.kernels.shape[0]} output channels"
            )
        if any(s < 1 for s in self.stride):
            raise ShapeError(f"stride must be positive, got {self.stride}")
        return self

    @property
    def out_channels(self) -> int:
        return self.kernels.shape[0]

    @property
    def in_channels(self) -> int:
        return self.kernels.shape[1]

    @property
    def window(self) -> tuple[int, int, int]:
        _, _, d, h, w = self.kernels.shape
        return (d, h, w)


class DenseParams(DomainModel):
    """One affine stage: weight [out, in] and bias [out]."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    weight: Tensor
    bias: Tensor

    @model_validator(mode="after")
    def _check(self) -> "DenseParams":
        if self.weight.rank != 2:
            raise ShapeError(f"dense weight must be rank 2, got {list(self.weight.shape)}")
        if self.bias.shape != (self.weight.shape[0],):
            raise ShapeError(
                f"dense bias {list(self.bias.shape)} does not match weight {list(self.weight.shape)}"
            )
        return self

    @property
    def in_features(self) -> int:
        return self.weight.shape[1]

    @property
    def out_features(self) -> int:
        return self.weight.shape[0]


class LayerGrad(BaseModel):
    """Adjoints of one layer application; every tensor matches its primal's shape."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    d_input: Tensor
    d_params: dict[str, Tensor] = Field(default_factory=dict)
