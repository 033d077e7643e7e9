"""
Network schema: scene-condition taxonomy, label containers, network
configuration and prediction output.

Scene conditions (categories are 1-based):
- glasses/illumination: Day bare face, Day glasses, Night glasses,
  Night bare face, Day sunglasses (5)
- head: Normal status, Looking at both sides, Nodding (3)
- mouth: Normal status, Talking and laughing, Yawning (3)
- eye: Sleepiness eye, Normal status (2)
Drowsiness: unit 0 = non-drowsy, unit 1 = drowsy.
"""

from enum import Enum, IntEnum
from typing import Iterator

from pydantic import BaseModel, ConfigDict, Field, model_validator

from layers.activations import one_hot_index
from layers.conv import conv3d_output_shape, maxpool3d_output_shape
from tensorCore import DomainModel, GeometryError, OneHotError, Tensor


class LabelError(ValueError):
    """A condition value is outside its category range."""


class LabelKind(str, Enum):
    GLASSES_ILLUM = "glasses_illum"
    HEAD = "head"
    MOUTH = "mouth"
    EYE = "eye"
    DROWSY = "drowsy"


class GlassesIllumination(IntEnum):
    DAY_BARE_FACE = 1
    DAY_GLASSES = 2
    NIGHT_GLASSES = 3
    NIGHT_BARE_FACE = 4
    DAY_SUNGLASSES = 5


class HeadCondition(IntEnum):
    NORMAL = 1
    LOOKING_ASIDE = 2
    NODDING = 3


class MouthCondition(IntEnum):
    NORMAL = 1
    TALKING_LAUGHING = 2
    YAWNING = 3


class EyeCondition(IntEnum):
    SLEEPINESS = 1
    NORMAL = 2


class Drowsiness(IntEnum):
    NON_DROWSY = 0
    DROWSY = 1


SCENE_KINDS: tuple[LabelKind, ...] = (
    LabelKind.GLASSES_ILLUM,
    LabelKind.HEAD,
    LabelKind.MOUTH,
    LabelKind.EYE,
)

CATEGORY_ENUMS: dict[LabelKind, type[IntEnum]] = {
    LabelKind.GLASSES_ILLUM: GlassesIllumination,
    LabelKind.HEAD: HeadCondition,
    LabelKind.MOUTH: MouthCondition,
    LabelKind.EYE: EyeCondition,
    LabelKind.DROWSY: Drowsiness,
}

# display names, per label kind
CONDITION_NAMES: dict[LabelKind, dict[int, str]] = {
    LabelKind.GLASSES_ILLUM: {
        GlassesIllumination.DAY_BARE_FACE: "Day bare face",
        GlassesIllumination.DAY_GLASSES: "Day glasses",
        GlassesIllumination.NIGHT_GLASSES: "Night glasses",
        GlassesIllumination.NIGHT_BARE_FACE: "Night bare face",
        GlassesIllumination.DAY_SUNGLASSES: "Day sunglasses",
    },
    LabelKind.HEAD: {
        HeadCondition.NORMAL: "Normal status",
        HeadCondition.LOOKING_ASIDE: "Looking at both sides",
        HeadCondition.NODDING: "Nodding",
    },
    LabelKind.MOUTH: {
        MouthCondition.NORMAL: "Normal status",
        MouthCondition.TALKING_LAUGHING: "Talking and laughing",
        MouthCondition.YAWNING: "Yawning",
    },
    LabelKind.EYE: {
        EyeCondition.SLEEPINESS: "Sleepiness eye",
        EyeCondition.NORMAL: "Normal status",
    },
    LabelKind.DROWSY: {
        Drowsiness.NON_DROWSY: "Non-drowsy",
        Drowsiness.DROWSY: "Drowsy",
    },
}


def code_length(kind: LabelKind) -> int:
    """One-hot length of a label kind: 5, 3, 3, 2 for the scene heads, 2 for drowsiness."""
    return len(CATEGORY_ENUMS[kind])


class ConditionLabels(BaseModel):
    """Clip-level ground truth: four scene conditions plus drowsiness."""

    model_config = ConfigDict(frozen=True)

    glasses_illum: GlassesIllumination
    head: HeadCondition
    mouth: MouthCondition
    eye: EyeCondition
    drowsy: Drowsiness

    def category(self, kind: LabelKind) -> IntEnum:
        return getattr(self, kind.value)

    def values(self) -> tuple[int, int, int, int, int]:
        """Raw label values in stream order (glasses/illum, head, mouth, eye, drowsy)."""
        return tuple(int(self.category(kind)) for kind in LabelKind)  # type: ignore[return-value]

    def scene_codes(self) -> "SceneCodes":
        from network.conditions import encode_condition

        return SceneCodes(
            **{kind.value: encode_condition(self.category(kind)) for kind in SCENE_KINDS}
        )

    def drowsy_code(self) -> Tensor:
        from network.conditions import encode_condition

        return encode_condition(self.drowsy)


class SceneCodes(DomainModel):
    """
    The four one-hot condition vectors fed to the fusion model.

    Ground truth during training, argmax-hardened head outputs at inference.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    glasses_illum: Tensor
    head: Tensor
    mouth: Tensor
    eye: Tensor

    @model_validator(mode="after")
    def _check(self) -> "SceneCodes":
        for kind in SCENE_KINDS:
            code = getattr(self, kind.value)
            if code.shape != (code_length(kind),):
                raise OneHotError(
                    f"{kind.value} code must have length {code_length(kind)}, got {list(code.shape)}"
                )
            one_hot_index(code)
        return self

    def items(self) -> Iterator[tuple[LabelKind, Tensor]]:
        for kind in SCENE_KINDS:
            yield kind, getattr(self, kind.value)


class NetworkConfig(DomainModel):
    """
    Architecture of the four models.

    Input [channels, frames, height, width]; six valid 3D convolutions with the
    given channel plan and kernel volumes, ReLU after each, (1,2,2) max pooling
    after the convolutions listed in pool_after (1-based); scene heads with two
    hidden layers; fusion width d and output width M; detector with one hidden
    layer and two output units.
    """

    model_config = ConfigDict(frozen=True)

    channels: int = Field(default=1, ge=1)
    frames: int = Field(default=5, ge=1)
    height: int = Field(default=32, ge=1)
    width: int = Field(default=32, ge=1)
    conv_channels: tuple[int, ...] = (8, 8, 16, 16, 32, 32)
    conv_kernels: tuple[tuple[int, int, int], ...] = (
        (3, 3, 3),
        (3, 3, 3),
        (1, 3, 3),
        (1, 3, 3),
        (1, 1, 1),
        (1, 1, 1),
    )
    pool_after: tuple[int, ...] = (2, 4)
    pool_window: tuple[int, int, int] = (1, 2, 2)
    head_hidden: tuple[int, int] = (128, 64)
    fusion_width: int = Field(default=64, ge=1, description="d: common projection width")
    fusion_out: int = Field(default=64, ge=1, description="M: condition-adaptive width")
    detector_hidden: int = Field(default=64, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def _check_geometry(self) -> "NetworkConfig":
        if len(self.conv_channels) != len(self.conv_kernels):
            raise GeometryError(
                f"{len(self.conv_channels)} conv channel counts but {len(self.conv_kernels)} kernels"
            )
        if any(c < 1 for c in self.conv_channels) or any(h < 1 for h in self.head_hidden):
            raise GeometryError("layer widths must be positive")
        bad = [i for i in self.pool_after if not 1 <= i <= len(self.conv_kernels)]
        if bad:
            raise GeometryError(f"pool_after refers to missing conv layers {bad}")
        self.layer_shapes()
        return self

    @property
    def input_shape(self) -> tuple[int, int, int, int]:
        return (self.channels, self.frames, self.height, self.width)

    def layer_shapes(self) -> list[tuple[int, int, int, int]]:
        """Output shape after each conv layer (after its pool, when one follows)."""
        shape = self.input_shape
        shapes = []
        in_ch = self.channels
        for i, (out_ch, kernel) in enumerate(zip(self.conv_channels, self.conv_kernels), start=1):
            shape = conv3d_output_shape(shape, (out_ch, in_ch, *kernel), (1, 1, 1))
            if i in self.pool_after:
                shape = maxpool3d_output_shape(shape, self.pool_window)
            shapes.append(shape)
            in_ch = out_ch
        return shapes

    @property
    def representation_shape(self) -> tuple[int, int, int, int]:
        return self.layer_shapes()[-1]

    @property
    def representation_size(self) -> int:
        c, d, h, w = self.representation_shape
        return c * d * h * w

    @classmethod
    def tiny(cls, seed: int = 0) -> "NetworkConfig":
        """Input [1,5,8,8], all widths <= 8; small enough for exhaustive gradient checks."""
        return cls(
            height=8,
            width=8,
            conv_channels=(2, 2, 4, 4, 4, 4),
            conv_kernels=((3, 3, 3), (3, 3, 3), (1, 1, 1), (1, 1, 1), (1, 1, 1), (1, 1, 1)),
            pool_after=(2, 4),
            pool_window=(1, 2, 2),
            head_hidden=(8, 8),
            fusion_width=8,
            fusion_out=8,
            detector_hidden=8,
            seed=seed,
        )


class ClipPrediction(BaseModel):
    """Inference output for one clip."""

    scene: dict[LabelKind, int]
    scene_names: dict[LabelKind, str]
    drowsy_class: Drowsiness
    drowsy_probability: float = Field(ge=0.0, le=1.0)
    probabilities: tuple[float, float]
