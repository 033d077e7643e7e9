"""
Checkpoint file for a Network.

Layout (little-endian):
  magic "CADN" | u32 version | u32 len + NetworkConfig JSON | u32 entry count |
  per entry: u32 name length, name bytes, u32 rank, rank x u32 extents, raw <f8 data
"""

import logging
from pathlib import Path

from pydantic import ValidationError

from network.model import Network
from network.schema import NetworkConfig
from tensorCore.serialization import (
    BinaryReader,
    TruncatedError,
    atomic_write_bytes,
    pack_tensor,
    pack_text,
    pack_u32,
)

logger = logging.getLogger(__name__)

MAGIC = b"CADN"
VERSION = 1


class CheckpointFormatError(ValueError):
    """The file is not a readable checkpoint (magic, version, truncation, registry)."""


def encode_checkpoint(net: Network) -> bytes:
    parts = [MAGIC, pack_u32(VERSION), pack_text(net.config.model_dump_json())]
    parts.append(pack_u32(len(net.params)))
    for name, tensor in net.params.items():
        parts.append(pack_text(name))
        parts.append(pack_tensor(tensor))
    return b"".join(parts)


def decode_checkpoint(data: bytes) -> Network:
    if not data:
        raise CheckpointFormatError("empty checkpoint file")
    reader = BinaryReader(data)
    try:
        if reader.take(len(MAGIC)) != MAGIC:
            raise CheckpointFormatError("not a checkpoint: bad magic")
        version = reader.u32()
        if version != VERSION:
            raise CheckpointFormatError(f"unsupported checkpoint version {version}")
        config = NetworkConfig.model_validate_json(reader.text())
        params = {}
        for _ in range(reader.u32()):
            name = reader.text()
            params[name] = reader.tensor()
    except TruncatedError as e:
        raise CheckpointFormatError(f"truncated checkpoint: {e}") from e
    except (ValidationError, UnicodeDecodeError) as e:
        raise CheckpointFormatError(f"corrupt checkpoint header: {e}") from e
    if reader.remaining:
        raise CheckpointFormatError(f"{reader.remaining} trailing bytes after last entry")
    try:
        return Network(config, params)
    except ValueError as e:
        raise CheckpointFormatError(str(e)) from e


def save_checkpoint(net: Network, path: str | Path) -> None:
    atomic_write_bytes(path, encode_checkpoint(net))
    logger.info("wrote checkpoint %s (%d parameters)", path, net.parameter_count())


def load_checkpoint(path: str | Path) -> Network:
    return decode_checkpoint(Path(path).read_bytes())
