"""Exception hierarchy shared across the package."""


class WaterfillError(Exception):
    """Base class for every error raised by this package."""


class ImageError(WaterfillError):
    """Problems reading, decoding or writing raster images."""


class ImageNotFoundError(ImageError, FileNotFoundError):
    pass


class UnsupportedFormatError(ImageError):
    pass


class ImageTooSmallError(ImageError):
    pass


class ImageWriteError(ImageError, OSError):
    pass


class DimensionMismatchError(WaterfillError, ValueError):
    pass


class UnstableRateError(WaterfillError, ValueError):
    """Diffusion rate outside the stable range (0, 0.25]."""


class DivergedError(WaterfillError):
    """The water surface grew past the divergence guard.

    Attributes:
        stage: pipeline stage that diverged ("coarse", "fine" or None when the
            stepper was called directly).
        iteration: iteration count at which the guard tripped.
    """

    def __init__(self, message, stage=None, iteration=None):
        super().__init__(message)
        self.stage = stage
        self.iteration = iteration

    def __str__(self):
        msg = super().__str__()
        if self.stage:
            return f"[{self.stage} stage] {msg}"
        return msg


class RateTooLargeError(WaterfillError, ValueError):
    pass


class InvalidTargetError(WaterfillError, ValueError):
    pass


class InvalidSpecError(WaterfillError, ValueError):
    pass
