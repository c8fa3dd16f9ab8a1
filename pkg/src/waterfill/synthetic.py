"""Synthetic shaded documents with known ground truth.

A document is a flat background with dark rectangular glyph strokes; the
distorted copy multiplies it by a smooth shading field whose darkest region
touches the image border, the way real camera or scanner shading does.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InvalidSpecError
from .imaging import RgbImage, YCbCrImage, quantize, rgb_to_ycbcr, ycbcr_to_rgb
from .pipeline import lambertian_correct

BORDER_CLEARANCE = 2
CORNERS = ("top_left", "top_right", "bottom_left", "bottom_right")
RAMP_DIRECTIONS = ("left_to_right", "right_to_left", "top_to_bottom", "bottom_to_top")
AXES = ("vertical", "horizontal")


@dataclass(frozen=True)
class GlyphBox:
    """Half-open pixel rectangle [x0, x1) x [y0, y1) painted at ``level``."""

    x0: int
    y0: int
    x1: int
    y1: int
    level: float = 40.0


@dataclass(frozen=True)
class LinearRamp:
    """Brightness rises linearly along ``direction`` from ``min_factor`` to 1."""

    direction: str = "left_to_right"
    min_factor: float = 0.4
    kind: str = field(default="linear_ramp", init=False)


@dataclass(frozen=True)
class CornerShadow:
    """Shadow centred on an image corner, fading out at radius_fraction * diagonal."""

    corner: str = "top_left"
    radius_fraction: float = 0.6
    min_factor: float = 0.4
    kind: str = field(default="corner_shadow", init=False)


@dataclass(frozen=True)
class SpineGradient:
    """Dark fold line across the page, as at the spine of an opened book.

    ``position`` places the fold as a fraction of the width (vertical axis)
    or height (horizontal axis); ``width_fraction`` sets the fold's half-width.
    """

    axis: str = "vertical"
    min_factor: float = 0.5
    position: float = 0.5
    width_fraction: float = 0.2
    kind: str = field(default="spine_gradient", init=False)


SHADING_KINDS = {"linear_ramp": LinearRamp, "corner_shadow": CornerShadow, "spine_gradient": SpineGradient}


@dataclass(frozen=True)
class SyntheticSpec:
    width: int = 512
    height: int = 384
    background_level: float = 200.0
    shading: object = field(default_factory=LinearRamp)
    glyph_boxes: tuple = None  # None -> generate a text layout from ``seed``
    glyph_level: float = 40.0
    glyph_size: int = 12
    seed: int = 0
    spec_id: str = ""

    def to_dict(self):
        d = asdict(self)
        if self.glyph_boxes is not None:
            d["glyph_boxes"] = [asdict(b) for b in self.glyph_boxes]
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        shading = d.pop("shading", None)
        if isinstance(shading, dict):
            shading = dict(shading)
            kind = shading.pop("kind", "linear_ramp")
            if kind not in SHADING_KINDS:
                raise InvalidSpecError(f"unknown shading model {kind!r}")
            try:
                shading = SHADING_KINDS[kind](**shading)
            except TypeError as exc:
                raise InvalidSpecError(f"bad {kind} parameters: {exc}") from exc
        if shading is not None:
            d["shading"] = shading
        boxes = d.pop("glyph_boxes", None)
        if boxes is not None:
            d["glyph_boxes"] = tuple(
                b if isinstance(b, GlyphBox) else GlyphBox(**b) for b in boxes
            )
        try:
            return cls(**d)
        except TypeError as exc:
            raise InvalidSpecError(f"bad synthetic spec: {exc}") from exc


def validate_spec(spec):
    if spec.width < 3 or spec.height < 3:
        raise InvalidSpecError(f"document {spec.width}x{spec.height} is too small")
    if not 0 <= spec.background_level <= 255:
        raise InvalidSpecError("background_level must lie in [0, 255]")
    s = spec.shading
    if not 0 < s.min_factor <= 1:
        raise InvalidSpecError(f"min_factor must lie in (0, 1], got {s.min_factor}")
    if isinstance(s, LinearRamp) and s.direction not in RAMP_DIRECTIONS:
        raise InvalidSpecError(f"unknown ramp direction {s.direction!r}")
    if isinstance(s, CornerShadow):
        if s.corner not in CORNERS:
            raise InvalidSpecError(f"unknown corner {s.corner!r}")
        if not s.radius_fraction > 0:
            raise InvalidSpecError("radius_fraction must be positive")
    if isinstance(s, SpineGradient):
        if s.axis not in AXES:
            raise InvalidSpecError(f"unknown spine axis {s.axis!r}")
        if not (0 <= s.position <= 1 and s.width_fraction > 0):
            raise InvalidSpecError("spine position must lie in [0, 1] with positive width")
    for b in spec.glyph_boxes or ():
        if not (
            b.x0 >= BORDER_CLEARANCE
            and b.y0 >= BORDER_CLEARANCE
            and b.x1 <= spec.width - BORDER_CLEARANCE
            and b.y1 <= spec.height - BORDER_CLEARANCE
            and b.x0 < b.x1
            and b.y0 < b.y1
        ):
            raise InvalidSpecError(f"glyph box {b} is not strictly interior")


def text_layout(width, height, glyph_size, level, seed):
    """Lines of stroke-built pseudo-characters, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    g = max(int(glyph_size), 4)
    stroke = max(1, g // 6)
    cell_w = max(3, int(round(0.6 * g)))
    margin_x = max(BORDER_CLEARANCE + 1, width // 12)
    margin_y = max(BORDER_CLEARANCE + 1, height // 12)
    line_h = int(round(1.7 * g))
    boxes = []
    y = margin_y
    while y + g <= height - margin_y:
        x = margin_x
        while True:
            n_chars = int(rng.integers(2, 9))
            if x + n_chars * (cell_w + stroke) > width - margin_x:
                break
            for _ in range(n_chars):
                boxes.extend(_character(x, y, cell_w, g, stroke, level, rng))
                x += cell_w + stroke
            x += cell_w  # word gap
        y += line_h
    return tuple(boxes)


def _character(x, y, w, h, s, level, rng):
    parts = []
    # Stems at left and/or right, bars at top, middle and/or bottom.
    if rng.random() < 0.8:
        parts.append(GlyphBox(x, y, x + s, y + h, level))
    if rng.random() < 0.4:
        parts.append(GlyphBox(x + w - s, y, x + w, y + h, level))
    for frac in (0.0, 0.5, 1.0):
        if rng.random() < 0.4:
            top = y + int(round(frac * (h - s)))
            parts.append(GlyphBox(x, top, x + w, top + s, level))
    if not parts:
        parts.append(GlyphBox(x + w // 2, y, x + w // 2 + s, y + h, level))
    return parts


def glyph_boxes_for(spec):
    if spec.glyph_boxes is not None:
        return tuple(spec.glyph_boxes)
    return text_layout(spec.width, spec.height, spec.glyph_size, spec.glyph_level, spec.seed)


def shading_field(shading, width, height):
    """Per-pixel multiplicative factor in [min_factor, 1]."""
    m = shading.min_factor
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    if isinstance(shading, LinearRamp):
        u = {
            "left_to_right": xs / (width - 1),
            "right_to_left": 1.0 - xs / (width - 1),
            "top_to_bottom": ys / (height - 1),
            "bottom_to_top": 1.0 - ys / (height - 1),
        }[shading.direction]
    elif isinstance(shading, CornerShadow):
        cy = 0.0 if shading.corner.startswith("top") else height - 1.0
        cx = 0.0 if shading.corner.endswith("left") else width - 1.0
        radius = shading.radius_fraction * math.hypot(width - 1, height - 1)
        r = np.minimum(np.hypot(xs - cx, ys - cy) / radius, 1.0)
        u = np.sin(0.5 * np.pi * r)
    elif isinstance(shading, SpineGradient):
        if shading.axis == "vertical":
            coord, extent = xs, width - 1.0
        else:
            coord, extent = ys, height - 1.0
        half = shading.width_fraction * extent
        d = np.minimum(np.abs(coord - shading.position * extent) / half, 1.0)
        u = np.sin(0.5 * np.pi * d)
    else:
        raise InvalidSpecError(f"unknown shading model {shading!r}")
    return m + (1.0 - m) * u


def render_ground_truth(spec):
    page = np.full((spec.height, spec.width), float(spec.background_level))
    for b in glyph_boxes_for(spec):
        page[b.y0:b.y1, b.x0:b.x1] = b.level
    return page


def generate_synthetic(spec):
    """Return ``(ground_truth, distorted)`` RGB images for ``spec``."""
    validate_spec(spec)
    page = render_ground_truth(spec)
    shade = shading_field(spec.shading, spec.width, spec.height)
    return RgbImage.from_gray(page), RgbImage.from_gray(page * shade)


def brightness_matched_reference(ground_truth, background_level, brightness):
    """Ground truth as the corrector would render it with a perfect background.

    The corrector maps the paper background to ``brightness * 255``, so the
    ground truth is pushed through the same Lambertian division with the
    known flat background before any PSNR comparison.
    """
    ycc = rgb_to_ycbcr(ground_truth)
    flat = np.full_like(ycc.y, float(background_level))
    y = lambertian_correct(ycc.y, flat, brightness)
    return ycbcr_to_rgb(YCbCrImage(y, ycc.cb, ycc.cr))


def default_corpus(n=20, width=512, height=384, seed=0):
    """Mixed-shading corpus cycling through the three shading families."""
    rng = np.random.default_rng(seed)
    specs = []
    for i in range(n):
        kind = i % 3
        if kind == 0:
            shading = LinearRamp(
                direction=RAMP_DIRECTIONS[int(rng.integers(4))],
                min_factor=float(rng.uniform(0.35, 0.7)),
            )
        elif kind == 1:
            shading = CornerShadow(
                corner=CORNERS[int(rng.integers(4))],
                radius_fraction=float(rng.uniform(0.4, 0.8)),
                min_factor=float(rng.uniform(0.35, 0.7)),
            )
        else:
            shading = SpineGradient(
                axis=AXES[int(rng.integers(2))],
                min_factor=float(rng.uniform(0.45, 0.75)),
                position=float(rng.choice([0.0, 0.5, 1.0])),
                width_fraction=float(rng.uniform(0.15, 0.35)),
            )
        specs.append(
            SyntheticSpec(
                width=width,
                height=height,
                background_level=float(rng.uniform(180, 230)),
                shading=shading,
                glyph_level=float(rng.uniform(20, 70)),
                glyph_size=int(rng.integers(9, 16)),
                seed=int(seed * 1000 + i),
                spec_id=f"synth-{i:02d}",
            )
        )
    return specs
