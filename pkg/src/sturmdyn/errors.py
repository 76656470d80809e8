"""Exception types shared across the package."""


class SturmdynError(Exception):
    """Base class for package-specific failures."""


class DepthExhaustedError(SturmdynError):
    """More continued-fraction coefficients were requested than are available."""


class UndecidableBoundaryError(SturmdynError):
    """An orbit point is too close to the coding interval's endpoint to resolve
    at the available continued-fraction depth."""


class WindowTooShortError(SturmdynError):
    """A sampled window does not cover the range an operation needs."""


class PartitionError(SturmdynError):
    """Block parsing failed.  Existence and uniqueness of the partition are
    theorems, so this signals an implementation bug, not bad input."""


class BandCountError(SturmdynError):
    """A band search produced the wrong number of bands."""


class AmbiguousContainmentError(SturmdynError):
    """A band straddles a parent band boundary beyond tolerance."""


class ClassificationError(SturmdynError):
    """A band could not be assigned a consistent hierarchy type."""


class SamplingError(SturmdynError):
    """Supplied samples are too sparse for the requested quadrature."""


class LeakageError(SturmdynError):
    """Wavepacket probability at the lattice edge exceeded the configured
    threshold; the truncated lattice is too small for the probed times."""

    def __init__(self, message, leakage=None, suggested_half_width=None):
        super().__init__(message)
        self.leakage = leakage
        self.suggested_half_width = suggested_half_width
