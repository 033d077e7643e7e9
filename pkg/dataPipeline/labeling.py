"""
Temporal-IOU clip labeling: a clip takes the label that occupies the majority
of its five frames.

A value seen in at least 3 of 5 frames wins. When no value reaches 3 (at
least three distinct values), the middle frame's label is used.
"""

from collections import Counter
from typing import Collection, Mapping, Sequence

from dataPipeline.schema import CLIP_LENGTH
from network.conditions import to_category
from network.schema import ConditionLabels, LabelError, LabelKind

MAJORITY = CLIP_LENGTH // 2 + 1
MIDDLE = CLIP_LENGTH // 2


def clip_label_from_frames(
    frame_labels: Sequence[int], valid: Collection[int] | None = None
) -> int:
    if len(frame_labels) != CLIP_LENGTH:
        raise LabelError(f"expected {CLIP_LENGTH} frame labels, got {len(frame_labels)}")
    if valid is not None:
        bad = [v for v in frame_labels if v not in valid]
        if bad:
            raise LabelError(f"frame labels {bad} outside {sorted(valid)}")
    value, count = Counter(frame_labels).most_common(1)[0]
    if count >= MAJORITY:
        return value
    return frame_labels[MIDDLE]


def label_clip(frame_labels: Mapping[LabelKind, Sequence[int]]) -> ConditionLabels:
    """Clip-level ConditionLabels from the five per-frame streams."""
    values = {}
    for kind in LabelKind:
        stream = [int(v) for v in frame_labels[kind]]
        for v in stream:
            to_category(kind, v)
        values[kind.value] = clip_label_from_frames(stream)
    return ConditionLabels(**values)
