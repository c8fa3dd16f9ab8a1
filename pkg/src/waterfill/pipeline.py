"""End-to-end illumination correction.

The default ``combined`` method sketches the background on a downsampled
luminance plane with flood-and-effuse, upscales that surface back to full
resolution and refines it with incremental filling. The corrected luminance
is the input divided by the estimated background (Lambertian model), scaled
by a brightness factor.
"""

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DimensionMismatchError
from .field import DiffusionParams, Method, run_to_convergence
from .imaging import YCbCrImage, rgb_to_ycbcr, ycbcr_to_rgb
from .multiscale import check_rate, downsample, upscale_bicubic


class PipelineMethod(str, Enum):
    COMBINED = "combined"
    INCREMENTAL_ONLY = "incremental_only"
    FLOOD_ONLY = "flood_only"


def default_coarse_params():
    return DiffusionParams(max_iters=1000)


def default_fine_params():
    return DiffusionParams(max_iters=3000)


@dataclass(frozen=True)
class PipelineConfig:
    ks: int = 5
    brightness: float = 0.85
    method: PipelineMethod = PipelineMethod.COMBINED
    coarse_params: DiffusionParams = field(default_factory=default_coarse_params)
    fine_params: DiffusionParams = field(default_factory=default_fine_params)
    g_floor: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "method", PipelineMethod(self.method))
        if int(self.ks) != self.ks or self.ks < 1:
            raise ValueError(f"ks must be a positive integer, got {self.ks!r}")
        object.__setattr__(self, "ks", int(self.ks))
        if not 0.0 <= self.brightness <= 1.0:
            raise ValueError(f"brightness must lie in [0, 1], got {self.brightness}")
        if not self.g_floor > 0:
            raise ValueError(f"g_floor must be positive, got {self.g_floor}")


@dataclass
class RunMetrics:
    coarse_iterations: int = 0
    fine_iterations: int = 0
    coarse_ms: float = 0.0
    fine_ms: float = 0.0
    total_ms: float = 0.0
    coarse_converged: bool = True
    fine_converged: bool = True

    def to_dict(self):
        return {
            "coarse_iterations": self.coarse_iterations,
            "fine_iterations": self.fine_iterations,
            "elapsed_ms": {
                "coarse": int(round(self.coarse_ms)),
                "fine": int(round(self.fine_ms)),
                "total": int(round(self.total_ms)),
            },
            "converged": {"coarse": self.coarse_converged, "fine": self.fine_converged},
        }


@dataclass(frozen=True)
class CorrectionResult:
    corrected: object
    background: np.ndarray
    metrics: RunMetrics


def lambertian_correct(y, g, brightness, g_floor=1.0):
    """Return clamp(brightness * 255 * y / max(g, g_floor), 0, 255)."""
    y = np.asarray(y, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if y.shape != g.shape:
        raise DimensionMismatchError(f"luminance {y.shape} vs background {g.shape}")
    return np.clip(brightness * 255.0 * y / np.maximum(g, g_floor), 0.0, 255.0)


def _background(y, config, callback=None, callback_every=0):
    metrics = RunMetrics()
    start = time.perf_counter()
    if config.method is PipelineMethod.COMBINED:
        ks = check_rate(y.shape, config.ks)
        coarse = downsample(y, ks, min_side=3)
        g_coarse, rep = run_to_convergence(
            coarse, Method.FLOOD_EFFUSE, config.coarse_params, stage="coarse"
        )
        metrics.coarse_iterations = rep.iterations
        metrics.coarse_converged = rep.converged
        g0 = upscale_bicubic(g_coarse, y.shape[1], y.shape[0])
        mid = time.perf_counter()
        metrics.coarse_ms = (mid - start) * 1e3
        g, rep = run_to_convergence(
            y,
            Method.INCREMENTAL,
            config.fine_params,
            w_init=np.maximum(g0 - y, 0.0),
            callback=callback,
            callback_every=callback_every,
            stage="fine",
        )
    else:
        mid = start
        method = (
            Method.INCREMENTAL
            if config.method is PipelineMethod.INCREMENTAL_ONLY
            else Method.FLOOD_EFFUSE
        )
        g, rep = run_to_convergence(
            y,
            method,
            config.fine_params,
            callback=callback,
            callback_every=callback_every,
            stage="fine",
        )
    end = time.perf_counter()
    metrics.fine_iterations = rep.iterations
    metrics.fine_converged = rep.converged
    metrics.fine_ms = (end - mid) * 1e3
    metrics.total_ms = (end - start) * 1e3
    return g, metrics


def estimate_background(img, config=None, callback=None, callback_every=0):
    """Converged water surface G over the luminance of ``img``."""
    config = config or PipelineConfig()
    g, _ = _background(rgb_to_ycbcr(img).y, config, callback, callback_every)
    return g


def correct_document(img, config=None, callback=None, callback_every=0):
    """Remove shading from ``img`` and return a :class:`CorrectionResult`.

    ``callback(t, G)`` is forwarded to the full-resolution stage for snapshot
    dumps.
    """
    config = config or PipelineConfig()
    start = time.perf_counter()
    ycc = rgb_to_ycbcr(img)
    g, metrics = _background(ycc.y, config, callback, callback_every)
    y_new = lambertian_correct(ycc.y, g, config.brightness, config.g_floor)
    corrected = ycbcr_to_rgb(YCbCrImage(y_new, ycc.cb, ycc.cr))
    metrics.total_ms = (time.perf_counter() - start) * 1e3
    return CorrectionResult(corrected, g, metrics)
