"""
Base adapter for clip sources.

Each source yields FrameSequences in its own way (procedural rendering,
frame folders on disk) and hands them to the shared ClipAssemblyService.
"""

from abc import ABC, abstractmethod
from typing import Iterator

from dataPipeline.core import ClipAssemblyService
from dataPipeline.schema import Dataset, FrameSequence, LabeledClip


class BaseClipSource(ABC):
    """Produce frame sequences and assemble them into labeled clips."""

    def __init__(self, assembly_service: ClipAssemblyService):
        self._assembly = assembly_service

    @abstractmethod
    def read(self) -> Iterator[FrameSequence]:
        """Yield five-frame sequences with per-frame labels, in a fixed order."""
        ...

    @property
    @abstractmethod
    def provenance(self) -> str:
        ...

    def clips(self) -> Iterator[LabeledClip]:
        for sequence in self.read():
            yield self._assembly.assemble(sequence)

    def build(self) -> Dataset:
        return Dataset(clips=list(self.clips()), provenance=self.provenance)
