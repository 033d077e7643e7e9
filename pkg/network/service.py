"""
Inference service: run the four models on a clip.

rep_forward -> scene_forward -> harden each head to a one-hot -> fuse -> detect.
The hardened codes stand in for the ground-truth codes used during training.
"""

import logging
from typing import Iterable

from network.conditions import category_from_index, condition_name, harden_scene
from network.detection import detect, detect_probabilities
from network.fusion import fuse
from network.model import Network
from network.representation import rep_forward
from network.scene import scene_forward
from network.schema import SCENE_KINDS, ClipPrediction, Drowsiness
from layers import one_hot_index
from tensorCore import Tensor, argmax

logger = logging.getLogger(__name__)


def predict_clip(clip: Tensor, net: Network) -> ClipPrediction:
    """Scene categories, drowsiness class and probability for one clip."""
    a, _ = rep_forward(clip, net)
    logits, _ = scene_forward(a, net)
    codes = harden_scene(logits)
    v, _ = fuse(a, codes, net)
    det_logits, _ = detect(v, net)
    probs = detect_probabilities(det_logits)

    scene = {}
    for kind, code in codes.items():
        scene[kind] = category_from_index(kind, one_hot_index(code))
    p_non, p_drowsy = (float(x) for x in probs.array)
    return ClipPrediction(
        scene={kind: int(scene[kind]) for kind in SCENE_KINDS},
        scene_names={kind: condition_name(scene[kind]) for kind in SCENE_KINDS},
        drowsy_class=Drowsiness(argmax(probs)),
        drowsy_probability=p_drowsy,
        probabilities=(p_non, p_drowsy),
    )


class DetectionService:
    """
    Runs predict_clip for a fixed network.

    The network is only read; several services may share one network.
    """

    def __init__(self, net: Network):
        self._net = net

    @property
    def network(self) -> Network:
        return self._net

    def predict(self, clip: Tensor) -> ClipPrediction:
        return predict_clip(clip, self._net)

    def predict_many(self, clips: Iterable[Tensor]) -> list[ClipPrediction]:
        predictions = [self.predict(clip) for clip in clips]
        logger.debug("predicted %d clips", len(predictions))
        return predictions
