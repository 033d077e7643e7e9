"""Confusion counts and detection rates (precision, detection rate, F-measure, accuracy)."""

from typing import Sequence

import numpy as np
from sklearn.metrics import confusion_matrix

from evaluation.schema import Confusion, RateMetrics
from network.schema import Drowsiness


def confusion(
    predictions: Sequence[int],
    truths: Sequence[int],
    positive: int = Drowsiness.DROWSY,
) -> Confusion:
    if len(predictions) != len(truths):
        raise ValueError(f"{len(predictions)} predictions for {len(truths)} ground-truth labels")
    if not truths:
        return Confusion()
    negative = int(Drowsiness.NON_DROWSY) if positive == Drowsiness.DROWSY else int(Drowsiness.DROWSY)
    labels = [negative, int(positive)]
    seen = set(int(v) for v in predictions) | set(int(v) for v in truths)
    if not seen <= set(labels):
        raise ValueError(f"binary classes {labels} expected, got {sorted(seen)}")
    (tn, fp), (fn, tp) = confusion_matrix(
        np.asarray(truths, dtype=int), np.asarray(predictions, dtype=int), labels=labels
    )
    return Confusion(tp=int(tp), fp=int(fp), fn=int(fn), tn=int(tn))


def _ratio(num: float, den: float, name: str, degenerate: list[str]) -> float:
    if den == 0:
        degenerate.append(name)
        return 0.0
    return num / den


def metrics(c: Confusion) -> RateMetrics:
    degenerate: list[str] = []
    precision = _ratio(c.tp, c.tp + c.fp, "precision", degenerate)
    detection_rate = _ratio(c.tp, c.tp + c.fn, "detection_rate", degenerate)
    f_measure = _ratio(2 * precision * detection_rate, precision + detection_rate, "f_measure", degenerate)
    accuracy = _ratio(c.tp + c.tn, c.total, "accuracy", degenerate)
    return RateMetrics(
        precision=precision,
        detection_rate=detection_rate,
        f_measure=f_measure,
        accuracy=accuracy,
        degenerate=degenerate,
    )
