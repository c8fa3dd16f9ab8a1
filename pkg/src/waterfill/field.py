"""Water-level diffusion on a luminance topography.

A grayscale field is read as terrain altitude ``h``. A non-negative water
level ``w`` sits on top of it and the water surface ``G = h + w`` is what the
iterations converge to. Two update rules are provided:

* incremental filling: water moves along the 4-neighbour Laplacian of G, so
  depressions accumulate water;
* flood-and-effuse: the surface is first flooded towards the peak altitude
  with a source decaying as exp(-t), then water may only leave a pixel
  towards lower neighbours.

In both cases the water level is clamped at zero and forced to zero on the
outermost pixel ring after every step, so basins that touch the border drain.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._kernels import flood_effuse_kernel, incremental_kernel
from .errors import DimensionMismatchError, DivergedError, UnstableRateError

MAX_STABLE_ETA = 0.25


class Method(str, Enum):
    INCREMENTAL = "incremental"
    FLOOD_EFFUSE = "flood_effuse"


def validate_eta(eta):
    """Return ``eta`` as a float if it lies in the stable range (0, 0.25]."""
    eta = float(eta)
    if not (0.0 < eta <= MAX_STABLE_ETA):
        raise UnstableRateError(
            f"eta={eta:g} is outside the stable range (0, {MAX_STABLE_ETA}]; "
            "larger rates flood the whole surface"
        )
    return eta


@dataclass(frozen=True)
class DiffusionParams:
    eta: float = 0.25
    delta: float = 0.01
    max_iters: int = 3000
    divergence_limit: float = 1e6

    def __post_init__(self):
        object.__setattr__(self, "eta", validate_eta(self.eta))
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be a positive integer, got {self.max_iters}")
        object.__setattr__(self, "max_iters", int(self.max_iters))
        if not self.divergence_limit > 0:
            raise ValueError("divergence_limit must be positive")


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    iterations: int
    max_update: float


def as_field(values, min_side=3):
    """Copy ``values`` into a C-contiguous float64 2D array and check it."""
    f = np.array(values, dtype=np.float64, order="C")
    if f.ndim != 2:
        raise ValueError(f"scalar field must be 2D, got shape {f.shape}")
    if min(f.shape) < min_side:
        raise ValueError(f"scalar field {f.shape} is smaller than {min_side}x{min_side}")
    if not np.all(np.isfinite(f)):
        raise ValueError("scalar field contains non-finite values")
    return f


def peak_altitude(h):
    return float(np.max(h))


def enforce_constraints(w):
    """Clamp ``w`` in place to w >= 0 with a dry boundary ring."""
    np.maximum(w, 0.0, out=w)
    w[0, :] = 0.0
    w[-1, :] = 0.0
    w[:, 0] = 0.0
    w[:, -1] = 0.0
    return w


@dataclass(frozen=True)
class WaterState:
    """Altitude, water level and iteration counter of one simulation."""

    h: np.ndarray
    w: np.ndarray
    t: int = 0

    @classmethod
    def dry(cls, h):
        h = as_field(h)
        return cls(h, np.zeros_like(h), 0)

    @property
    def surface(self):
        return self.h + self.w


def _check_guard(max_abs, params, t, stage=None):
    if not math.isfinite(max_abs) or max_abs > params.divergence_limit:
        raise DivergedError(
            f"|G| reached {max_abs:g} (limit {params.divergence_limit:g}) at iteration {t}",
            stage=stage,
            iteration=t,
        )


def incremental_step(state, params):
    """One synchronous incremental-filling update; returns a new state."""
    out = np.empty_like(state.w)
    _, max_abs = incremental_kernel(state.h, state.w, out, params.eta)
    _check_guard(max_abs, params, state.t + 1)
    return WaterState(state.h, out, state.t + 1)


def flood_effuse_step(state, h_peak, params):
    """One synchronous flood-and-effuse update at time ``state.t``."""
    out = np.empty_like(state.w)
    _, max_abs = flood_effuse_kernel(
        state.h, state.w, out, float(h_peak), math.exp(-state.t), params.eta
    )
    _check_guard(max_abs, params, state.t + 1)
    return WaterState(state.h, out, state.t + 1)


def run_to_convergence(
    h,
    method,
    params,
    w_init=None,
    callback=None,
    callback_every=0,
    stage=None,
):
    """Iterate a stepper until the surface stops moving.

    Stops when max |G(t) - G(t-1)| over all pixels drops below
    ``params.delta`` or after ``params.max_iters`` steps.

    Args:
        h: altitude field.
        method: :class:`Method` or its string value.
        params: :class:`DiffusionParams`.
        w_init: optional starting water level, clamped to the constraints.
        callback: called as ``callback(t, G)`` every ``callback_every``
            iterations plus at t=0 and at the final iterate, with a read-only surface.
        stage: label attached to a :class:`DivergedError`.

    Returns:
        ``(G, ConvergenceReport)``.
    """
    method = Method(method)
    h = as_field(h)
    if w_init is None:
        w = np.zeros_like(h)
    else:
        w = as_field(w_init)
        if w.shape != h.shape:
            raise DimensionMismatchError(f"w_init {w.shape} does not match h {h.shape}")
    enforce_constraints(w)
    out = np.empty_like(w)
    h_peak = peak_altitude(h)

    def emit(t):
        g = h + w
        g.flags.writeable = False
        callback(t, g)

    if callback and callback_every:
        emit(0)

    converged = False
    max_update = 0.0
    t = 0
    while t < params.max_iters:
        if method is Method.INCREMENTAL:
            max_update, max_abs = incremental_kernel(h, w, out, params.eta)
        else:
            max_update, max_abs = flood_effuse_kernel(
                h, w, out, h_peak, math.exp(-t), params.eta
            )
        t += 1
        _check_guard(max_abs, params, t, stage)
        w, out = out, w
        if callback and callback_every and t % callback_every == 0:
            emit(t)
        if max_update < params.delta:
            converged = True
            break
    if callback and callback_every and t % callback_every:
        emit(t)
    return h + w, ConvergenceReport(converged, t, float(max_update))


def flood_term(h_peak, g, t):
    """Flood source (h_peak - G) * exp(-t), per pixel."""
    return (h_peak - np.asarray(g, dtype=np.float64)) * math.exp(-t)


def effusion_terms(g):
    """The four per-neighbour outflows min(G_n - G, 0) on interior pixels.

    Returns an array of shape (4, H-2, W-2) ordered east, west, south, north.
    """
    g = np.asarray(g, dtype=np.float64)
    c = g[1:-1, 1:-1]
    neighbours = (g[1:-1, 2:], g[1:-1, :-2], g[2:, 1:-1], g[:-2, 1:-1])
    return np.stack([np.minimum(n - c, 0.0) for n in neighbours])
