"""Exception types shared across the package."""


class OtfsSblError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(OtfsSblError, ValueError):
    """Operands have incompatible shapes."""


class NotHermitian(OtfsSblError, ValueError):
    """Matrix fails the Hermitian symmetry check."""


class NotPositiveDefinite(OtfsSblError, ValueError):
    """Factorization hit a non-positive pivot."""


class CpTooLong(OtfsSblError, ValueError):
    """Cyclic prefix length meets or exceeds the block length."""


class NonPositiveNoise(OtfsSblError, ValueError):
    """Noise variance must be strictly positive."""


class TooManyPaths(OtfsSblError, ValueError):
    """More paths requested than distinct delay bins available."""


class OutOfGrid(OtfsSblError, ValueError):
    """Delay or Doppler value falls outside the modeled grid."""


class EmptyGrid(OtfsSblError, ValueError):
    """Dictionary grid has no bins."""


class NoSnapshots(OtfsSblError, ValueError):
    """Estimator called with an empty snapshot list."""


class NumericalBreakdown(OtfsSblError, RuntimeError):
    """Linear algebra failed despite hyperparameter floors."""


class EmptySupport(OtfsSblError, ValueError):
    """Oracle estimator needs a nonempty support set."""


class SingularInformation(OtfsSblError, ValueError):
    """Bayesian information matrix is not invertible."""


class ZeroReference(OtfsSblError, ValueError):
    """NMSE reference matrix has zero norm."""


class LengthMismatch(OtfsSblError, ValueError):
    """Vectors being compared have different lengths."""


class OddBitCount(OtfsSblError, ValueError):
    """QPSK maps bit pairs; an even number of bits is required."""


class SingularCovariance(OtfsSblError, ValueError):
    """Noise covariance passed to the detector is singular."""


class ConfigError(OtfsSblError, ValueError):
    """Malformed run configuration or config file."""
