"""
One-hot condition codes: encode a category, decode a code, harden head logits.
"""

from enum import IntEnum

import numpy as np

from layers.activations import one_hot_index
from network.schema import (
    CATEGORY_ENUMS,
    CONDITION_NAMES,
    LabelError,
    LabelKind,
    SceneCodes,
    SCENE_KINDS,
)
from tensorCore import Tensor, argmax


def kind_of(category: IntEnum) -> LabelKind:
    for kind, enum_cls in CATEGORY_ENUMS.items():
        if isinstance(category, enum_cls):
            return kind
    raise LabelError(f"{category!r} is not a scene-condition category")


def to_category(kind: LabelKind, value: int) -> IntEnum:
    """Validate a raw label value against its category range."""
    enum_cls = CATEGORY_ENUMS[kind]
    try:
        return enum_cls(int(value))
    except ValueError:
        valid = [int(m) for m in enum_cls]
        raise LabelError(
            f"{kind.value} label {value} outside range {valid[0]}..{valid[-1]}"
        ) from None


def _first_value(kind: LabelKind) -> int:
    return min(int(m) for m in CATEGORY_ENUMS[kind])


def encode_condition(category: IntEnum) -> Tensor:
    """
    One-hot code of a category, e.g. Day bare face -> 10000, Nodding -> 001.
    """
    kind = kind_of(category)
    enum_cls = CATEGORY_ENUMS[kind]
    code = np.zeros(len(enum_cls))
    code[int(category) - _first_value(kind)] = 1.0
    return Tensor._wrap(code)


def encode_value(kind: LabelKind, value: int) -> Tensor:
    return encode_condition(to_category(kind, value))


def decode_condition(kind: LabelKind, code: Tensor) -> IntEnum:
    return CATEGORY_ENUMS[kind](one_hot_index(code) + _first_value(kind))


def condition_name(category: IntEnum) -> str:
    return CONDITION_NAMES[kind_of(category)][category]


def category_from_index(kind: LabelKind, index: int) -> IntEnum:
    """Category for a zero-based output-unit index."""
    return to_category(kind, index + _first_value(kind))


def harden(logits: Tensor) -> Tensor:
    """One-hot of argmax(logits); ties go to the lowest index."""
    code = np.zeros(logits.size)
    code[argmax(logits)] = 1.0
    return Tensor._wrap(code)


def harden_scene(logits: dict[LabelKind, Tensor]) -> SceneCodes:
    return SceneCodes(**{kind.value: harden(logits[kind]) for kind in SCENE_KINDS})
