"""
3D convolution (valid, strided) and non-overlapping 3D max pooling.

Inputs are single clips laid out [channels, depth, height, width]. Both
operations walk the kernel/window offsets in row-major order and vectorize
over the remaining axes, which keeps forward and backward deterministic.
"""

import numpy as np

from layers.schema import Conv3dParams, LayerGrad
from tensorCore import GeometryError, ShapeError, Tensor

_AXES = ("depth", "height", "width")


def _valid_extent(extent: int, kernel: int, stride: int, axis: str) -> int:
    if kernel < 1 or kernel > extent:
        raise GeometryError(
            f"{axis}: receptive field {kernel} does not fit input extent {extent}"
        )
    if (extent - kernel) % stride:
        raise GeometryError(
            f"{axis}: (extent {extent} - kernel {kernel}) is not divisible by stride {stride}"
        )
    return (extent - kernel) // stride + 1


def conv3d_output_shape(
    input_shape: tuple[int, ...], kernels_shape: tuple[int, ...], stride: tuple[int, int, int]
) -> tuple[int, int, int, int]:
    """Output [out_ch, D', H', W'] for a valid convolution, or a GeometryError."""
    if len(input_shape) != 4:
        raise ShapeError(f"conv3d input must be [C, D, H, W], got {list(input_shape)}")
    c_in = input_shape[0]
    out_ch, k_in = kernels_shape[:2]
    if c_in != k_in:
        raise ShapeError(
            f"conv3d channel mismatch: input has {c_in}, kernels expect {k_in}"
        )
    dims = tuple(
        _valid_extent(n, k, s, axis)
        for n, k, s, axis in zip(input_shape[1:], kernels_shape[2:], stride, _AXES)
    )
    return (out_ch, *dims)


def _window(x: np.ndarray, offset: tuple[int, int, int], out_dims, stride) -> np.ndarray:
    a, b, c = offset
    (od, oh, ow), (sd, sh, sw) = out_dims, stride
    return x[
        :,
        a : a + sd * (od - 1) + 1 : sd,
        b : b + sh * (oh - 1) + 1 : sh,
        c : c + sw * (ow - 1) + 1 : sw,
    ]


def conv3d(input: Tensor, p: Conv3dParams) -> Tensor:
    """
    Valid 3D convolution without activation.

    out[o, z, y, x] = bias[o] + sum over (c, i, j, k) of
        input[c, z*sd + i, y*sh + j, x*sw + k] * kernels[o, c, i, j, k]

    With D_r = D = 1 this is the ordinary 2D convolution of each frame.
    """
    out_shape = conv3d_output_shape(input.shape, p.kernels.shape, p.stride)
    x, k = input.array, p.kernels.array
    out = np.zeros(out_shape, dtype=np.float64)
    for offset in np.ndindex(*p.window):
        window = _window(x, offset, out_shape[1:], p.stride)
        out += np.tensordot(k[(slice(None), slice(None), *offset)], window, axes=(1, 0))
    out += p.bias.array[:, None, None, None]
    return Tensor._wrap(out)


def conv3d_backward(input: Tensor, p: Conv3dParams, d_output: Tensor) -> LayerGrad:
    """Gradients of sum(d_output * conv3d(input, p)) w.r.t. input, kernels and bias."""
    out_shape = conv3d_output_shape(input.shape, p.kernels.shape, p.stride)
    if d_output.shape != out_shape:
        raise ShapeError(
            f"conv3d_backward: d_output {list(d_output.shape)} != output {list(out_shape)}"
        )
    x, k, g = input.array, p.kernels.array, d_output.array
    d_x = np.zeros_like(x)
    d_k = np.zeros_like(k)
    for offset in np.ndindex(*p.window):
        sel = (slice(None), slice(None), *offset)
        window = _window(x, offset, out_shape[1:], p.stride)
        d_k[sel] = np.tensordot(g, window, axes=([1, 2, 3], [1, 2, 3]))
        _window(d_x, offset, out_shape[1:], p.stride)[...] += np.tensordot(
            k[sel], g, axes=(0, 0)
        )
    d_b = g.sum(axis=(1, 2, 3))
    return LayerGrad(
        d_input=Tensor._wrap(d_x),
        d_params={"kernels": Tensor._wrap(d_k), "bias": Tensor._wrap(d_b)},
    )


def maxpool3d_output_shape(
    input_shape: tuple[int, ...], window: tuple[int, int, int]
) -> tuple[int, int, int, int]:
    if len(input_shape) != 4:
        raise ShapeError(f"maxpool3d input must be [C, D, H, W], got {list(input_shape)}")
    dims = []
    for n, w, axis in zip(input_shape[1:], window, _AXES):
        if w < 1 or n % w:
            raise GeometryError(f"{axis}: pool window {w} does not divide extent {n}")
        dims.append(n // w)
    return (input_shape[0], *dims)


def maxpool3d(input: Tensor, window: tuple[int, int, int]) -> tuple[Tensor, np.ndarray]:
    """
    Non-overlapping max pooling (stride = window).

    Returns the pooled tensor and, per output unit, the flat row-major index of
    the input element that won. Ties go to the lowest flat index.
    """
    c, od, oh, ow = maxpool3d_output_shape(input.shape, window)
    wd, wh, ww = window
    x = input.array
    blocks = (
        x.reshape(c, od, wd, oh, wh, ow, ww)
        .transpose(0, 1, 3, 5, 2, 4, 6)
        .reshape(c, od, oh, ow, wd * wh * ww)
    )
    local = np.argmax(blocks, axis=-1)
    pooled = np.take_along_axis(blocks, local[..., None], axis=-1)[..., 0]

    i, j, k = np.unravel_index(local, window)
    ch, zd, zh, zw = np.indices((c, od, oh, ow))
    index_map = np.ravel_multi_index(
        (ch, zd * wd + i, zh * wh + j, zw * ww + k), x.shape
    )
    return Tensor._wrap(pooled), index_map


def maxpool3d_backward(
    d_output: Tensor, index_map: np.ndarray, input_shape: tuple[int, ...]
) -> Tensor:
    """Route each output cotangent to the input element that produced the max."""
    if d_output.shape != index_map.shape:
        raise ShapeError(
            f"maxpool3d_backward: d_output {list(d_output.shape)} != index map {list(index_map.shape)}"
        )
    d_x = np.zeros(int(np.prod(input_shape)), dtype=np.float64)
    np.add.at(d_x, index_map.ravel(), d_output.array.ravel())
    return Tensor._wrap(d_x.reshape(input_shape))
