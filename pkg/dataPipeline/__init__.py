"""
Clip dataset module.

Sources: procedural synthetic footage, PGM frame folders. Every source yields
five-frame sequences with per-frame labels; ClipAssemblyService resizes them,
applies temporal-IOU labeling and tags the scenario, producing LabeledClips
ready for the network.
"""

from dataPipeline.augment import augment, augment_dataset, blur_clip, flip_clip
from dataPipeline.core import ClipAssemblyService
from dataPipeline.imaging import flip_horizontal, gaussian_filter, resize_bilinear
from dataPipeline.labeling import clip_label_from_frames, label_clip
from dataPipeline.schema import CLIP_LENGTH, Dataset, FrameSequence, LabeledClip, SynthConfig
from dataPipeline.sources import BaseClipSource, FrameFolderSource, SyntheticSource, synth_generate
from dataPipeline.storage import DatasetFormatError, load_dataset, save_dataset

__all__ = [
    "CLIP_LENGTH",
    "FrameSequence",
    "LabeledClip",
    "Dataset",
    "SynthConfig",
    "ClipAssemblyService",
    "clip_label_from_frames",
    "label_clip",
    "resize_bilinear",
    "gaussian_filter",
    "flip_horizontal",
    "flip_clip",
    "blur_clip",
    "augment",
    "augment_dataset",
    "BaseClipSource",
    "SyntheticSource",
    "FrameFolderSource",
    "synth_generate",
    "save_dataset",
    "load_dataset",
    "DatasetFormatError",
]
