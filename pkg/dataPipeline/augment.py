"""
Label-preserving augmentation: horizontal flip x Gaussian image pyramid.

Every clip yields {original, flipped} x {unfiltered, sigma_1, sigma_2, sigma_3}
= 8 clips with unchanged labels. The pyramid levels blur each frame; they do
not change resolution.
"""

import logging
from typing import Sequence

import numpy as np

from dataPipeline.imaging import flip_horizontal, gaussian_filter
from dataPipeline.schema import Dataset, LabeledClip
from tensorCore import Tensor

logger = logging.getLogger(__name__)

DEFAULT_SIGMAS: tuple[float, ...] = (0.5, 1.0, 2.0)


def flip_clip(clip: LabeledClip) -> LabeledClip:
    flipped = Tensor._wrap(flip_horizontal(clip.clip.array))
    return clip.model_copy(update={"clip": flipped})


def blur_clip(clip: LabeledClip, sigma: float) -> LabeledClip:
    frames = clip.clip.array[0]
    blurred = np.stack([gaussian_filter(Tensor._wrap(f.copy()), sigma).array for f in frames])
    return clip.model_copy(update={"clip": Tensor._wrap(blurred[None])})


def augment(clip: LabeledClip, sigmas: Sequence[float] = DEFAULT_SIGMAS) -> list[LabeledClip]:
    out: list[LabeledClip] = []
    for base in (clip, flip_clip(clip)):
        out.append(base)
        out.extend(blur_clip(base, s) for s in sigmas)
    return out


def augment_dataset(dataset: Dataset, sigmas: Sequence[float] = DEFAULT_SIGMAS) -> Dataset:
    clips = [variant for clip in dataset.clips for variant in augment(clip, sigmas)]
    logger.info("augmented %d clips to %d", len(dataset), len(clips))
    return Dataset(clips=clips, provenance=f"{dataset.provenance} +augment{list(sigmas)}".strip())
