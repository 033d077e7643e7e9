from dataPipeline.sources.base import BaseClipSource
from dataPipeline.sources.frame_folder import FrameFolderSource
from dataPipeline.sources.synthetic import SyntheticSource, synth_generate

__all__ = ["BaseClipSource", "SyntheticSource", "FrameFolderSource", "synth_generate"]
