"""
Little-endian binary framing shared by the dataset container and checkpoints.

Tensor record: u32 rank, rank x u32 extents, then the raw `<f8` data in
row-major order. Files are written atomically (temp file + rename) so a
failed command never leaves a partial output behind.
"""

import os
import struct
import tempfile
from pathlib import Path
from typing import Mapping

import numpy as np

from tensorCore.tensor import Tensor

_U32 = struct.Struct("<I")
_U8 = struct.Struct("<B")


class TruncatedError(ValueError):
    """The byte stream ended before a complete record was read."""


def pack_u32(value: int) -> bytes:
    return _U32.pack(value)


def pack_u8(value: int) -> bytes:
    return _U8.pack(value)


def pack_text(text: str) -> bytes:
    raw = text.encode("utf-8")
    return _U32.pack(len(raw)) + raw


def pack_tensor(tensor: Tensor) -> bytes:
    parts = [_U32.pack(tensor.rank)]
    parts.extend(_U32.pack(d) for d in tensor.shape)
    parts.append(tensor.array.astype("<f8", copy=False).tobytes())
    return b"".join(parts)


class BinaryReader:
    """Bounds-checked cursor over an in-memory byte string."""

    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0

    @property
    def remaining(self) -> int:
        return len(self._data) - self._pos

    def take(self, n: int) -> bytes:
        if n < 0 or self._pos + n > len(self._data):
            raise TruncatedError(
                f"needed {n} bytes at offset {self._pos}, only {self.remaining} left"
            )
        chunk = self._data[self._pos : self._pos + n]
        self._pos += n
        return chunk

    def u32(self) -> int:
        return _U32.unpack(self.take(_U32.size))[0]

    def u8(self) -> int:
        return _U8.unpack(self.take(_U8.size))[0]

    def text(self) -> str:
        return self.take(self.u32()).decode("utf-8")

    def tensor(self) -> Tensor:
        rank = self.u32()
        if rank == 0 or rank > 8:
            raise TruncatedError(f"implausible tensor rank {rank}")
        extents = [self.u32() for _ in range(rank)]
        count = int(np.prod(extents))
        values = np.frombuffer(self.take(count * 8), dtype="<f8")
        return Tensor._wrap(values.astype(np.float64).reshape(extents))


def atomic_write_all(files: Mapping[str | Path, bytes]) -> None:
    """
    Write several files as one unit. Every payload goes to a sibling temp file
    first, then all are renamed into place; on any failure the temp files and
    the targets already renamed are removed, so either all files appear or none.
    """
    targets = [Path(p) for p in files]
    if len({t.resolve() for t in targets}) != len(targets):
        raise ValueError(f"output paths collide: {[str(t) for t in targets]}")
    staged: list[tuple[str, Path]] = []
    placed: list[Path] = []
    try:
        for target, data in zip(targets, files.values()):
            if target.is_dir():
                raise IsADirectoryError(f"{target} is a directory")
            target.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
            staged.append((tmp, target))
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
        for tmp, target in staged:
            os.replace(tmp, target)
            placed.append(target)
    except BaseException:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
        for target in placed:
            target.unlink(missing_ok=True)
        raise


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    """Write data to path via a sibling temp file and os.replace."""
    atomic_write_all({path: data})


def atomic_write_text(path: str | Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))
