"""Image and text comparison metrics."""

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .imaging import RgbImage

MAX_VALUE = 255.0


@dataclass(frozen=True)
class PsnrResult:
    psnr_db: float  # math.inf for identical inputs
    mse: float

    @property
    def is_infinite(self):
        return math.isinf(self.psnr_db)

    def __str__(self):
        return "inf" if self.is_infinite else f"{self.psnr_db:.4f}"


def _as_array(x):
    return x.pixels if isinstance(x, RgbImage) else np.asarray(x)


def psnr(a, b):
    """PSNR in dB with a peak of 255, MSE taken over every channel and pixel."""
    if isinstance(a, RgbImage) != isinstance(b, RgbImage):
        raise DimensionMismatchError("cannot compare an RgbImage with a scalar field")
    xa = _as_array(a).astype(np.float64)
    xb = _as_array(b).astype(np.float64)
    if xa.shape != xb.shape:
        raise DimensionMismatchError(f"shape {xa.shape} vs {xb.shape}")
    mse = float(np.mean((xa - xb) ** 2))
    if mse == 0.0:
        return PsnrResult(math.inf, 0.0)
    return PsnrResult(20.0 * math.log10(MAX_VALUE / math.sqrt(mse)), mse)


def edit_distance(a, b):
    """Levenshtein distance with unit costs over code points."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def normalize_whitespace(text):
    return re.sub(r"\s+", " ", text).strip()


def text_edit_distance(a, b):
    """Edit distance between two texts after collapsing whitespace runs."""
    return edit_distance(normalize_whitespace(a), normalize_whitespace(b))
