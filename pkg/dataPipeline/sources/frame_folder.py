"""
Frame-folder import.

A folder holds 8-bit PGM frames (any file name; sorted order is frame order)
and a `labels.txt` with one line per frame:

    frame_index glasses_illum head mouth eye drowsy

Blank lines and lines starting with '#' are ignored. Frames are cut into
consecutive non-overlapping windows of five; a trailing partial window is
dropped. Colour frames are converted to grayscale by channel average.
"""

import logging
from pathlib import Path
from typing import Iterator

import cv2
import numpy as np

from dataPipeline.core import ClipAssemblyService
from dataPipeline.schema import CLIP_LENGTH, FrameSequence
from dataPipeline.sources.base import BaseClipSource
from network.schema import LabelKind
from tensorCore import Tensor

logger = logging.getLogger(__name__)

LABEL_FILE = "labels.txt"
FRAME_SUFFIXES = (".pgm",)


def parse_label_file(path: Path) -> dict[int, tuple[int, ...]]:
    """frame index -> five label values, in LabelKind order."""
    labels: dict[int, tuple[int, ...]] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 1 + len(LabelKind):
            raise ValueError(f"{path}:{lineno}: expected {1 + len(LabelKind)} integers, got {len(fields)}")
        try:
            index, *values = (int(f) for f in fields)
        except ValueError as e:
            raise ValueError(f"{path}:{lineno}: {e}") from e
        labels[index] = tuple(values)
    return labels


def read_frame(path: Path) -> np.ndarray:
    image = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if image is None:
        raise ValueError(f"cannot read frame {path}")
    image = image.astype(np.float64)
    if image.ndim == 3:
        image = image.mean(axis=2)
    return image / 255.0


class FrameFolderSource(BaseClipSource):
    def __init__(self, assembly_service: ClipAssemblyService, folder: str | Path):
        super().__init__(assembly_service)
        self.folder = Path(folder)
        if not self.folder.is_dir():
            raise ValueError(f"{self.folder} is not a directory")

    @property
    def provenance(self) -> str:
        return f"frames {self.folder}"

    def frame_paths(self) -> list[Path]:
        return sorted(p for p in self.folder.iterdir() if p.suffix.lower() in FRAME_SUFFIXES)

    def read(self) -> Iterator[FrameSequence]:
        label_path = self.folder / LABEL_FILE
        if not label_path.is_file():
            raise ValueError(f"missing {LABEL_FILE} in {self.folder}")
        labels = parse_label_file(label_path)
        paths = self.frame_paths()
        n_windows = len(paths) // CLIP_LENGTH
        if len(paths) % CLIP_LENGTH:
            logger.warning(
                "%s: dropping %d trailing frames", self.folder, len(paths) % CLIP_LENGTH
            )
        for w in range(n_windows):
            indices = range(w * CLIP_LENGTH, (w + 1) * CLIP_LENGTH)
            missing = [i for i in indices if i not in labels]
            if missing:
                raise ValueError(f"{label_path}: no labels for frames {missing}")
            frames = [read_frame(paths[i]) for i in indices]
            if len({f.shape for f in frames}) > 1:
                raise ValueError(f"{self.folder}: frames {list(indices)} differ in size")
            yield FrameSequence(
                frames=Tensor._wrap(np.stack(frames)),
                labels={
                    kind: tuple(labels[i][k] for i in indices)
                    for k, kind in enumerate(LabelKind)
                },
                source_id=f"{self.folder}#{w}",
            )
