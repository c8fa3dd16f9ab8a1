"""Raster I/O and the RGB <-> YCbCr split used by the pipeline.

Only the luminance plane is handed to the diffusion core; the chroma planes
are carried through untouched and recombined at the end.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    DimensionMismatchError,
    ImageNotFoundError,
    ImageTooSmallError,
    ImageWriteError,
    UnsupportedFormatError,
)

MIN_SIDE = 3
SUPPORTED_FORMATS = ("PNG", "JPEG")

# Full-range ITU-R BT.601.
KR, KG, KB = 0.299, 0.587, 0.114
CB_SCALE = 0.564
CR_SCALE = 0.713


@dataclass(frozen=True)
class RgbImage:
    """8-bit RGB raster, ``pixels`` has shape (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"expected (H, W, 3) pixel array, got shape {px.shape}")
        if px.shape[0] < MIN_SIDE or px.shape[1] < MIN_SIDE:
            raise ImageTooSmallError(
                f"image is {px.shape[1]}x{px.shape[0]}, minimum is {MIN_SIDE}x{MIN_SIDE}"
            )
        object.__setattr__(self, "pixels", np.ascontiguousarray(px, dtype=np.uint8))

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @classmethod
    def from_gray(cls, gray):
        """Build a neutral-chroma image from a 2D array of 8-bit-range values."""
        g = quantize(gray)
        return cls(np.repeat(g[:, :, None], 3, axis=2))


@dataclass(frozen=True)
class YCbCrImage:
    """Three real-valued planes of identical shape."""

    y: np.ndarray
    cb: np.ndarray
    cr: np.ndarray

    def __post_init__(self):
        planes = [np.asarray(p, dtype=np.float64) for p in (self.y, self.cb, self.cr)]
        shape = planes[0].shape
        if len(shape) != 2 or any(p.shape != shape for p in planes):
            raise DimensionMismatchError(
                f"plane shapes differ: {[p.shape for p in planes]}"
            )
        for name, p in zip(("y", "cb", "cr"), planes):
            object.__setattr__(self, name, p)

    @property
    def width(self):
        return self.y.shape[1]

    @property
    def height(self):
        return self.y.shape[0]


def quantize(values):
    """Clamp to [0, 255] and round half up to uint8."""
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, 255.0)
    return np.floor(v + 0.5).astype(np.uint8)


def load_image(path):
    """Decode a PNG or JPEG file into an :class:`RgbImage`.

    Transparent pixels are composited over white.

    Raises:
        ImageNotFoundError: the path does not exist.
        UnsupportedFormatError: the file is not a decodable PNG/JPEG.
        ImageTooSmallError: either side is below 3 pixels.
    """
    path = Path(path)
    if not path.is_file():
        raise ImageNotFoundError(f"image not found: {path}")
    try:
        with Image.open(path) as im:
            fmt = im.format
            if fmt not in SUPPORTED_FORMATS:
                raise UnsupportedFormatError(f"{path}: unsupported format {fmt!r}")
            im.load()
            rgb = _flatten_to_rgb(im)
    except UnidentifiedImageError as exc:
        raise UnsupportedFormatError(f"{path}: not a recognised image") from exc
    except OSError as exc:
        raise UnsupportedFormatError(f"{path}: could not decode ({exc})") from exc
    return RgbImage(np.asarray(rgb, dtype=np.uint8))


def _flatten_to_rgb(im):
    has_alpha = im.mode in ("RGBA", "LA", "PA") or (
        im.mode == "P" and "transparency" in im.info
    )
    if not has_alpha:
        return im.convert("RGB")
    rgba = im.convert("RGBA")
    white = Image.new("RGBA", rgba.size, (255, 255, 255, 255))
    return Image.alpha_composite(white, rgba).convert("RGB")


def save_image(img, path):
    """Write an image losslessly as PNG.

    ``img`` is either an :class:`RgbImage` or a 2D array, which is clamped,
    quantized and written as single-channel 8-bit grayscale.
    """
    path = Path(path)
    if isinstance(img, RgbImage):
        pil = Image.fromarray(img.pixels, mode="RGB")
    else:
        arr = np.asarray(img)
        if arr.ndim != 2:
            raise ValueError(f"expected RgbImage or 2D array, got shape {arr.shape}")
        pil = Image.fromarray(quantize(arr), mode="L")
    try:
        pil.save(path, format="PNG")
    except OSError as exc:
        raise ImageWriteError(f"cannot write {path}: {exc}") from exc


def rgb_to_ycbcr(img):
    px = img.pixels.astype(np.float64)
    r, g, b = px[..., 0], px[..., 1], px[..., 2]
    y = KR * r + KG * g + KB * b
    cb = 128.0 + (b - y) * CB_SCALE
    cr = 128.0 + (r - y) * CR_SCALE
    return YCbCrImage(
        np.clip(y, 0.0, 255.0), np.clip(cb, 0.0, 255.0), np.clip(cr, 0.0, 255.0)
    )


def ycbcr_to_rgb(img):
    """Exact algebraic inverse of :func:`rgb_to_ycbcr`, clamped and quantized.

    Planes are not range-checked here, so an over-bright corrected Y simply
    saturates.
    """
    y = img.y
    r = y + (img.cr - 128.0) / CR_SCALE
    b = y + (img.cb - 128.0) / CB_SCALE
    g = (y - KR * r - KB * b) / KG
    return RgbImage(quantize(np.stack([r, g, b], axis=-1)))
