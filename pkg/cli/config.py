"""
Run configuration: network architecture plus training hyper-parameters.

Precedence: command-line flags > JSON config file > defaults. For `train`,
the frame extents default to those of the dataset.
"""

import json
import logging
from pathlib import Path
from typing import Any, Mapping

from pydantic import BaseModel, ConfigDict, Field

from network.schema import NetworkConfig
from training.schema import TrainConfig

logger = logging.getLogger(__name__)


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    network: NetworkConfig = Field(default_factory=NetworkConfig)
    training: TrainConfig = Field(default_factory=TrainConfig)


def _merge(base: dict[str, Any], updates: Mapping[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in updates.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_run_config(
    path: str | Path | None = None,
    overrides: Mapping[str, Mapping[str, Any]] | None = None,
    defaults: Mapping[str, Mapping[str, Any]] | None = None,
) -> RunConfig:
    """
    defaults: values that replace the built-in defaults (e.g. extents taken
    from the dataset); overrides: flag values, None entries ignored.
    """
    layers: dict[str, Any] = _merge(RunConfig().model_dump(), defaults or {})
    if path is not None:
        layers = _merge(layers, json.loads(Path(path).read_text(encoding="utf-8")))
    flags = {
        section: {k: v for k, v in values.items() if v is not None}
        for section, values in (overrides or {}).items()
    }
    config = RunConfig.model_validate(_merge(layers, flags))
    logger.info("effective config: %s", config.model_dump_json())
    return config
