import numpy as np
import pytest

from dataPipeline import SynthConfig, synth_generate
from network import Network, NetworkConfig


def numeric_grad(f, x: np.ndarray, eps: float = 1e-6) -> np.ndarray:
    """Central differences of the scalar function f at x (x is not modified)."""
    g = np.zeros_like(x, dtype=float)
    for idx in np.ndindex(x.shape):
        shifted = x.copy()
        shifted[idx] = x[idx] + eps
        f_pos = f(shifted)
        shifted[idx] = x[idx] - eps
        f_neg = f(shifted)
        g[idx] = (f_pos - f_neg) / (2 * eps)
    return g


def rel_error(a: np.ndarray, b: np.ndarray, floor: float = 1e-8) -> float:
    return float(np.max(np.abs(a - b) / np.maximum(floor, np.maximum(np.abs(a), np.abs(b)))))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_config():
    return NetworkConfig.tiny(seed=0)


@pytest.fixture
def tiny_net(tiny_config):
    return Network.initialize(tiny_config)


@pytest.fixture(scope="session")
def tiny_dataset():
    """Ten 8x8 synthetic clips, alternating non-drowsy / drowsy."""
    return synth_generate(10, seed=3, config=SynthConfig(height=8, width=8))
