"""Water-filling illumination correction for document images."""

from .errors import (
    DimensionMismatchError,
    DivergedError,
    ImageError,
    ImageNotFoundError,
    ImageTooSmallError,
    InvalidSpecError,
    InvalidTargetError,
    RateTooLargeError,
    UnstableRateError,
    UnsupportedFormatError,
    WaterfillError,
)
from .field import (
    ConvergenceReport,
    DiffusionParams,
    Method,
    WaterState,
    flood_effuse_step,
    incremental_step,
    peak_altitude,
    run_to_convergence,
    validate_eta,
)
from .imaging import RgbImage, YCbCrImage, load_image, rgb_to_ycbcr, save_image, ycbcr_to_rgb
from .metrics import PsnrResult, edit_distance, psnr
from .multiscale import downsample, upscale_bicubic
from .pipeline import (
    CorrectionResult,
    PipelineConfig,
    PipelineMethod,
    RunMetrics,
    correct_document,
    estimate_background,
    lambertian_correct,
)

__version__ = "0.1.0"
