"""
ROC curve and AUC over drowsiness probabilities.

Thresholds sweep the distinct scores from high to low (tied scores share one
threshold); the AUC is the trapezoidal area. The first point (0, 0) uses
max(score) + 1 as its threshold.
"""

from typing import Sequence

import numpy as np
from sklearn.metrics import auc, roc_curve

from evaluation.schema import RocCurve, RocPoint
from network.schema import Drowsiness


class UndefinedAucError(ValueError):
    """All ground-truth labels belong to one class."""


def roc_auc(
    scores: Sequence[float],
    truths: Sequence[int],
    positive: int = Drowsiness.DROWSY,
) -> RocCurve:
    if len(scores) != len(truths):
        raise ValueError(f"{len(scores)} scores for {len(truths)} ground-truth labels")
    y_score = np.asarray(scores, dtype=np.float64)
    y_true = np.asarray(truths, dtype=int)
    if y_score.size and not ((y_score >= 0.0) & (y_score <= 1.0)).all():
        raise ValueError("scores must lie in [0, 1]")
    if len(np.unique(y_true)) < 2:
        raise UndefinedAucError("ROC needs both classes among the ground-truth labels")
    fpr, tpr, thresholds = roc_curve(y_true, y_score, pos_label=int(positive), drop_intermediate=False)
    thresholds = np.where(np.isfinite(thresholds), thresholds, y_score.max() + 1.0)
    points = [
        RocPoint(threshold=float(t), fpr=float(f), tpr=float(r))
        for t, f, r in zip(thresholds, fpr, tpr)
    ]
    return RocCurve(points=points, auc=float(auc(fpr, tpr)))
