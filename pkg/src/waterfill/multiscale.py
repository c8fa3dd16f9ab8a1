"""Coarse-to-fine resampling: block-mean downsampling, Catmull-Rom upscaling."""

import math

import numpy as np

from .errors import InvalidTargetError, RateTooLargeError

MIN_COARSE_SIDE = 3


def coarse_shape(shape, ks):
    return (math.ceil(shape[0] / ks), math.ceil(shape[1] / ks))


def check_rate(shape, ks, min_side=MIN_COARSE_SIDE):
    """Reject rates leaving fewer than ``min_side`` coarse pixels per side."""
    if int(ks) != ks or ks < 1:
        raise RateTooLargeError(f"sampling rate must be a positive integer, got {ks!r}")
    ks = int(ks)
    if ks > min(shape) or min(coarse_shape(shape, ks)) < min_side:
        raise RateTooLargeError(
            f"sampling rate {ks} leaves a coarse grid of {coarse_shape(shape, ks)} "
            f"for a {shape} field; need at least {min_side} per side"
        )
    return ks


def downsample(f, ks, min_side=1):
    """Average ``ks`` x ``ks`` blocks; partial edge blocks average what they hold.

    The pipeline passes ``min_side=3`` so the coarse grid keeps an interior.
    """
    f = np.asarray(f, dtype=np.float64)
    ks = check_rate(f.shape, ks, min_side)
    if ks == 1:
        return f.copy()
    rows = np.arange(0, f.shape[0], ks)
    cols = np.arange(0, f.shape[1], ks)
    sums = np.add.reduceat(np.add.reduceat(f, rows, axis=0), cols, axis=1)
    counts = np.outer(np.diff(np.append(rows, f.shape[0])), np.diff(np.append(cols, f.shape[1])))
    return sums / counts


def catmull_rom_weights(s):
    """Kernel weights (a = -0.5) for taps at -1, 0, +1, +2 around ``floor(s)``."""
    t = s - np.floor(s)
    t2 = t * t
    t3 = t2 * t
    w0 = -0.5 * t3 + t2 - 0.5 * t
    w1 = 1.5 * t3 - 2.5 * t2 + 1.0
    w2 = -1.5 * t3 + 2.0 * t2 + 0.5 * t
    w3 = 0.5 * t3 - 0.5 * t2
    return np.stack([w0, w1, w2, w3])


def _resample_axis0(f, n_out):
    n_in = f.shape[0]
    if n_out == n_in:
        return f.copy()
    s = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
    base = np.floor(s).astype(np.int64)
    weights = catmull_rom_weights(s)
    idx = [np.clip(base + k, 0, n_in - 1) for k in (-1, 0, 1, 2)]
    centre = f[idx[1]]
    # Interpolate offsets from the centre tap so constant input stays exact.
    out = centre.copy()
    for k in (0, 2, 3):
        out += weights[k][:, None] * (f[idx[k]] - centre)
    return out


def upscale_bicubic(f, target_width, target_height):
    """Separable Catmull-Rom upscale with pixel-centre alignment and edge clamping."""
    f = np.asarray(f, dtype=np.float64)
    if target_height < f.shape[0] or target_width < f.shape[1]:
        raise InvalidTargetError(
            f"target {target_width}x{target_height} is smaller than source "
            f"{f.shape[1]}x{f.shape[0]}"
        )
    tmp = _resample_axis0(f, int(target_height))
    return np.ascontiguousarray(_resample_axis0(tmp.T, int(target_width)).T)
