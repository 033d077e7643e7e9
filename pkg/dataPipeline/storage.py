"""
Dataset container.

Layout (little-endian):
  magic "CADD" | u32 version | u32 clip count | u32 len + provenance text |
  per clip: tensor record (u32 rank, extents, <f8 pixels),
            5 label bytes (glasses/illum, head, mouth, eye, drowsy),
            1 scenario byte
"""

import logging
from pathlib import Path

from pydantic import ValidationError

from dataPipeline.schema import Dataset, LabeledClip
from network.schema import ConditionLabels, LabelKind
from tensorCore import ShapeError
from tensorCore.serialization import (
    BinaryReader,
    TruncatedError,
    atomic_write_bytes,
    pack_tensor,
    pack_text,
    pack_u8,
    pack_u32,
)

logger = logging.getLogger(__name__)

MAGIC = b"CADD"
VERSION = 1


class DatasetFormatError(ValueError):
    """The file is not a readable dataset container."""


def encode_dataset(dataset: Dataset) -> bytes:
    parts = [MAGIC, pack_u32(VERSION), pack_u32(len(dataset)), pack_text(dataset.provenance)]
    for clip in dataset.clips:
        parts.append(pack_tensor(clip.clip))
        parts.extend(pack_u8(v) for v in clip.labels.values())
        parts.append(pack_u8(int(clip.scenario)))
    return b"".join(parts)


def decode_dataset(data: bytes) -> Dataset:
    if not data:
        raise DatasetFormatError("empty dataset file")
    reader = BinaryReader(data)
    try:
        if reader.take(len(MAGIC)) != MAGIC:
            raise DatasetFormatError("not a dataset: bad magic")
        version = reader.u32()
        if version != VERSION:
            raise DatasetFormatError(f"unsupported dataset version {version}")
        count = reader.u32()
        provenance = reader.text()
        clips = []
        for _ in range(count):
            tensor = reader.tensor()
            values = [reader.u8() for _ in LabelKind]
            scenario = reader.u8()
            labels = ConditionLabels(**{k.value: v for k, v in zip(LabelKind, values)})
            clips.append(LabeledClip(clip=tensor, labels=labels, scenario=scenario))
    except TruncatedError as e:
        raise DatasetFormatError(f"truncated dataset: {e}") from e
    except (ValidationError, ShapeError, UnicodeDecodeError) as e:
        raise DatasetFormatError(f"corrupt dataset record: {e}") from e
    if reader.remaining:
        raise DatasetFormatError(f"{reader.remaining} trailing bytes after last clip")
    try:
        return Dataset(clips=clips, provenance=provenance)
    except (ValidationError, ShapeError) as e:
        raise DatasetFormatError(str(e)) from e


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    atomic_write_bytes(path, encode_dataset(dataset))
    logger.info("wrote %d clips to %s", len(dataset), path)


def load_dataset(path: str | Path) -> Dataset:
    dataset = decode_dataset(Path(path).read_bytes())
    logger.debug("read %d clips from %s", len(dataset), path)
    return dataset
