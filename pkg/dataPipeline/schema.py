"""
Clip dataset schema.

- FrameSequence: five consecutive grayscale frames with one label per frame
  for each of the five label streams (glasses/illum, head, mouth, eye, drowsy).
- LabeledClip: a network-ready clip [1, 5, H, W] with clip-level labels and
  its glasses/illumination scenario.
- Dataset: ordered clips with a provenance note.
"""

from collections import Counter

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from network.schema import ConditionLabels, GlassesIllumination, LabelKind
from tensorCore import DomainModel, ShapeError, Tensor

CLIP_LENGTH = 5


class FrameSequence(DomainModel):
    """Five frames [5, H, W] in [0, 1] and per-frame label streams."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    frames: Tensor
    labels: dict[LabelKind, tuple[int, ...]]
    source_id: str | None = None

    @model_validator(mode="after")
    def _check(self) -> "FrameSequence":
        if self.frames.rank != 3 or self.frames.shape[0] != CLIP_LENGTH:
            raise ShapeError(
                f"frame sequence must be [{CLIP_LENGTH}, H, W], got {list(self.frames.shape)}"
            )
        if set(self.labels) != set(LabelKind):
            raise ValueError(f"frame labels need all streams {[k.value for k in LabelKind]}")
        for kind, stream in self.labels.items():
            if len(stream) != CLIP_LENGTH:
                raise ValueError(f"{kind.value}: {len(stream)} frame labels, expected {CLIP_LENGTH}")
        return self


class LabeledClip(DomainModel):
    """Network input with clip-level ground truth."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    clip: Tensor
    labels: ConditionLabels
    scenario: GlassesIllumination

    @field_validator("clip")
    @classmethod
    def _check_clip(cls, clip: Tensor) -> Tensor:
        if clip.rank != 4 or clip.shape[:2] != (1, CLIP_LENGTH):
            raise ShapeError(f"clip must be [1, {CLIP_LENGTH}, H, W], got {list(clip.shape)}")
        return clip

    @property
    def extents(self) -> tuple[int, int, int, int]:
        return tuple(self.clip.shape)  # type: ignore[return-value]


class Dataset(DomainModel):
    """Ordered clips of identical extents."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    clips: list[LabeledClip]
    provenance: str = ""

    @model_validator(mode="after")
    def _check(self) -> "Dataset":
        shapes = {c.extents for c in self.clips}
        if len(shapes) > 1:
            raise ShapeError(f"dataset mixes clip extents {sorted(shapes)}")
        return self

    def __len__(self) -> int:
        return len(self.clips)

    @property
    def extents(self) -> tuple[int, int, int, int] | None:
        return self.clips[0].extents if self.clips else None

    def class_balance(self) -> dict[str, dict[str, int]]:
        """Clip counts per drowsiness class and per scenario."""
        drowsy = Counter(c.labels.drowsy.name for c in self.clips)
        scenario = Counter(c.scenario.name for c in self.clips)
        return {"drowsy": dict(sorted(drowsy.items())), "scenario": dict(sorted(scenario.items()))}


class SynthConfig(BaseModel):
    """Synthetic renderer settings."""

    model_config = ConfigDict(frozen=True)

    height: int = Field(default=32, ge=2)
    width: int = Field(default=32, ge=2)
    noise: float = Field(default=0.02, ge=0.0, description="pixel noise standard deviation")
    max_noisy_frames: int = Field(
        default=2, ge=0, le=2, description="frames per stream allowed to deviate from the clip label"
    )
