"""
Joint objective and its gradients for a batch of labeled clips.

Per clip:
    E_su  = E_gl + E_h + E_m + E_e      (softmax cross-entropy of each scene head)
    E_det = cross-entropy of the detector on the fused representation
Training-time fusion uses the ground-truth condition codes. The representation
receives the sum of the scene-head path and the fusion path.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from dataPipeline.schema import LabeledClip
from layers import softmax_cross_entropy
from network.conditions import encode_condition
from network.detection import detect, detect_backward
from network.fusion import fuse, fuse_backward
from network.model import Network
from network.representation import rep_backward, rep_forward
from network.scene import scene_backward, scene_forward
from network.schema import SCENE_KINDS
from tensorCore import NonFiniteError, Tensor
from training.schema import Phase, TrainConfig


@dataclass(frozen=True)
class LossResult:
    loss: float
    e_su: float
    e_det: float
    gradients: dict[str, Tensor] | None


def loss_weights(cfg: TrainConfig, phase: Phase) -> tuple[float, float]:
    """(weight of E_su, weight of E_det) for a phase."""
    if phase == Phase.SCENE_PRETRAIN:
        return cfg.beta_reg, 0.0
    return (1.0 - cfg.lam) * cfg.beta_reg, cfg.lam


def joint_loss(
    batch: Sequence[LabeledClip],
    net: Network,
    cfg: TrainConfig,
    phase: Phase = Phase.JOINT,
    with_gradients: bool = True,
) -> LossResult:
    """
    Batch-mean objective. Gradients cover the whole registry; parameters that a
    zero-weighted term would reach get exact zeros.
    """
    if not batch:
        raise ValueError("empty batch")
    w_su, w_det = loss_weights(cfg, phase)
    n = len(batch)
    rep_shape = net.config.representation_shape
    acc = {name: np.zeros(t.shape) for name, t in net.params.items()} if with_gradients else None
    total_su = total_det = total = 0.0

    for sample in batch:
        a, rep_cache = rep_forward(sample.clip, net)
        logits, scene_cache = scene_forward(a, net)
        e_su = 0.0
        d_logits = {}
        for kind in SCENE_KINDS:
            loss_k, d_k = softmax_cross_entropy(logits[kind], encode_condition(sample.labels.category(kind)))
            e_su += loss_k
            d_logits[kind] = d_k.scale(w_su / n)

        try:
            v, fusion_cache = fuse(a, sample.labels.scene_codes(), net)
            det_logits, det_cache = detect(v, net)
            e_det, d_det = softmax_cross_entropy(det_logits, sample.labels.drowsy_code())
        except NonFiniteError:
            # e_det is only reported while its weight is zero
            if w_det != 0.0:
                raise
            e_det = math.nan

        total_su += e_su
        total_det += e_det
        total += w_su * e_su + (w_det * e_det if w_det != 0.0 else 0.0)
        if acc is None:
            continue

        d_a = np.zeros(net.config.representation_size)
        if w_su != 0.0:
            d_a_su, head_grads = scene_backward(d_logits, net, scene_cache)
            d_a += d_a_su.array
            _accumulate(acc, head_grads)
        if w_det != 0.0:
            d_v, det_grads = detect_backward(d_det.scale(w_det / n), net, det_cache)
            d_a_fu, fusion_grads = fuse_backward(d_v, net, fusion_cache)
            d_a += d_a_fu.array
            _accumulate(acc, det_grads)
            _accumulate(acc, fusion_grads)
        _accumulate(acc, rep_backward(Tensor._wrap(d_a.reshape(rep_shape)), net, rep_cache))

    gradients = None if acc is None else {name: Tensor._wrap(g) for name, g in acc.items()}
    return LossResult(loss=total / n, e_su=total_su / n, e_det=total_det / n, gradients=gradients)


def _accumulate(acc: dict[str, np.ndarray], grads: dict[str, Tensor]) -> None:
    for name, g in grads.items():
        acc[name] += g.array
