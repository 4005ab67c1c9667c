"""Exception types raised by the library.

Everything derives from LdbError (a ValueError), so callers may catch
either the specific condition or the generic class.
"""


class LdbError(ValueError):
    """Base class for all ldbkit errors."""


class UnsupportedFilter(LdbError):
    """Requested a QMF family/length that is not in the filter table."""


class LengthNotDyadic(LdbError):
    """Signal length is not a power of two >= 2."""


class DepthExceedsLog2N(LdbError):
    """Requested decomposition depth exceeds log2 of the signal length."""


class IndexOutOfRange(LdbError, IndexError):
    """Coordinate lookup outside the coefficient tree."""


class EmptyClass(LdbError):
    """An operation that needs signals from every class got an empty one."""


class ClassTooSmall(LdbError):
    """Pairwise statistics need at least two signals per class."""


class KTooLarge(LdbError):
    """More features requested than the basis has coordinates."""


class DimensionMismatch(LdbError):
    """Projection request is incompatible with the feature space."""


class InvalidParams(LdbError):
    """Cluster-search parameters violate their admissible ranges."""


class ConfigMismatch(LdbError):
    """Signal or dataset does not match the model's dictionary config."""


class EmptyDataset(LdbError):
    """Scoring requires at least one sample."""


class InvalidN(LdbError):
    """Scattering-sum generator supports n in {3, 4, 5} only."""


class InvalidClass(LdbError):
    """Triangular-waveform generator supports classes 1..3 only."""
