"""
Frame-level image operations: bilinear resizing, Gaussian filtering and the
horizontal flip. Outputs are clamped to [0, 1].
"""

import math

import numpy as np
from scipy import ndimage

from tensorCore import GeometryError, Tensor


def _clamp(array: np.ndarray) -> Tensor:
    return Tensor._wrap(np.clip(array, 0.0, 1.0))


def resize_bilinear(frame: Tensor, out: tuple[int, int]) -> Tensor:
    """
    Bilinear resampling of an [H, W] frame with corner-aligned sampling:
    output corners land exactly on input corners.
    """
    if frame.rank != 2:
        raise GeometryError(f"resize expects an [H, W] frame, got {list(frame.shape)}")
    (h, w), (oh, ow) = frame.shape, out
    if min(h, w, oh, ow) < 2:
        raise GeometryError(f"resize needs extents >= 2, got {h}x{w} -> {oh}x{ow}")
    if (h, w) == (oh, ow):
        return Tensor._wrap(frame.numpy())
    resized = ndimage.zoom(
        frame.array, (oh / h, ow / w), order=1, mode="nearest", grid_mode=False
    )
    return _clamp(resized)


def gaussian_filter(frame: Tensor, sigma: float) -> Tensor:
    """Separable Gaussian blur, radius ceil(3 sigma), normalized kernel, clamped edges."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    radius = math.ceil(3.0 * sigma)
    blurred = ndimage.gaussian_filter(frame.array, sigma, mode="nearest", radius=radius)
    return _clamp(blurred)


def flip_horizontal(array: np.ndarray) -> np.ndarray:
    """Mirror along the last (width) axis."""
    return np.ascontiguousarray(array[..., ::-1])
