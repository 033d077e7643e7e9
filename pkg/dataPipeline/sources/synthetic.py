"""Synthetic clip source: procedurally rendered sequences, deterministic per seed."""

import logging
from typing import Iterator

from dataPipeline.core import ClipAssemblyService
from dataPipeline.schema import Dataset, FrameSequence, SynthConfig
from dataPipeline.sources.base import BaseClipSource
from dataPipeline.synth import render_sequence

logger = logging.getLogger(__name__)


class SyntheticSource(BaseClipSource):
    def __init__(
        self,
        assembly_service: ClipAssemblyService,
        n_clips: int,
        seed: int,
        config: SynthConfig = SynthConfig(),
    ):
        if n_clips < 1:
            raise ValueError(f"need at least one clip, got {n_clips}")
        super().__init__(assembly_service)
        self.n_clips = n_clips
        self.seed = seed
        self.config = config

    @property
    def provenance(self) -> str:
        return (
            f"synth seed={self.seed} clips={self.n_clips} "
            f"size={self.config.height}x{self.config.width} noise={self.config.noise}"
        )

    def read(self) -> Iterator[FrameSequence]:
        for index in range(self.n_clips):
            yield render_sequence(index, self.seed, self.config)


def synth_generate(n_clips: int, seed: int, config: SynthConfig = SynthConfig()) -> Dataset:
    """n_clips rendered clips, alternating non-drowsy/drowsy, cycling the five scenarios."""
    source = SyntheticSource(
        ClipAssemblyService(config.height, config.width), n_clips, seed, config
    )
    dataset = source.build()
    logger.info("generated %d synthetic clips (%s)", len(dataset), dataset.provenance)
    return dataset
