"""
Network module: representation learner, four scene-understanding heads,
fusion model and detector, plus the one-hot condition codes.

Consumes clips [1, T, H, W] (from dataPipeline), produces scene categories and
a drowsiness probability. Training (training package) drives the backward passes.
"""

from network.checkpoint import CheckpointFormatError, load_checkpoint, save_checkpoint
from network.conditions import (
    condition_name,
    decode_condition,
    encode_condition,
    encode_value,
    harden,
    harden_scene,
)
from network.detection import detect, detect_backward, detect_probabilities
from network.fusion import fuse, fuse_backward
from network.model import COMPONENT_GROUPS, Network, group_of, in_groups, parameter_specs
from network.representation import rep_backward, rep_forward
from network.scene import scene_backward, scene_forward
from network.schema import (
    ClipPrediction,
    ConditionLabels,
    Drowsiness,
    EyeCondition,
    GlassesIllumination,
    HeadCondition,
    LabelError,
    LabelKind,
    MouthCondition,
    NetworkConfig,
    SCENE_KINDS,
    SceneCodes,
)
from network.service import DetectionService, predict_clip

__all__ = [
    "NetworkConfig",
    "Network",
    "ConditionLabels",
    "SceneCodes",
    "ClipPrediction",
    "LabelKind",
    "LabelError",
    "SCENE_KINDS",
    "GlassesIllumination",
    "HeadCondition",
    "MouthCondition",
    "EyeCondition",
    "Drowsiness",
    "COMPONENT_GROUPS",
    "group_of",
    "in_groups",
    "parameter_specs",
    "encode_condition",
    "encode_value",
    "decode_condition",
    "condition_name",
    "harden",
    "harden_scene",
    "rep_forward",
    "rep_backward",
    "scene_forward",
    "scene_backward",
    "fuse",
    "fuse_backward",
    "detect",
    "detect_backward",
    "detect_probabilities",
    "predict_clip",
    "DetectionService",
    "save_checkpoint",
    "load_checkpoint",
    "CheckpointFormatError",
]
