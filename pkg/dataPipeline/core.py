"""
Clip assembly: turn a FrameSequence from any source into a LabeledClip.

Resizes every frame to the target extents (bilinear, corner aligned), stacks
the frames into [1, 5, H, W], applies temporal-IOU labeling to the five label
streams and tags the clip with its glasses/illumination scenario.
"""

import logging
from typing import Callable

import numpy as np

from dataPipeline.imaging import resize_bilinear
from dataPipeline.labeling import label_clip
from dataPipeline.schema import FrameSequence, LabeledClip
from tensorCore import Tensor

logger = logging.getLogger(__name__)


class ClipAssemblyService:
    """
    Central assembly step shared by all clip sources.

    on_assembled: optional callback(clip) invoked for every assembled clip.
    """

    def __init__(
        self,
        height: int,
        width: int,
        on_assembled: Callable[[LabeledClip], None] | None = None,
    ):
        self.height = height
        self.width = width
        self._on_assembled = on_assembled

    def assemble(self, sequence: FrameSequence) -> LabeledClip:
        target = (self.height, self.width)
        frames = [
            resize_bilinear(Tensor._wrap(frame.copy()), target).array
            for frame in sequence.frames.array
        ]
        clip_array = np.clip(np.stack(frames), 0.0, 1.0)[None]
        labels = label_clip(sequence.labels)
        clip = LabeledClip(
            clip=Tensor._wrap(clip_array), labels=labels, scenario=labels.glasses_illum
        )
        if self._on_assembled:
            self._on_assembled(clip)
        return clip
