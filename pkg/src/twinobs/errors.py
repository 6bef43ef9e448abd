"""Exception hierarchy shared across the package."""


class TwinObsError(Exception):
    """Base class for all errors raised by this package."""


class NonHermitianError(TwinObsError):
    pass


class ConvergenceFailureError(TwinObsError):
    pass


class DimensionMismatchError(TwinObsError):
    pass


class NotPositiveError(TwinObsError):
    pass


class NotNormalizedError(TwinObsError):
    pass


class WeightError(TwinObsError):
    pass


class NotProjectorError(TwinObsError):
    pass


class NotPureError(TwinObsError):
    pass


class NotReducibleError(TwinObsError):
    pass


class SpectraMismatchError(TwinObsError):
    pass


class DegenerateSpectrumCollisionError(TwinObsError):
    pass


class NotSymmetricError(TwinObsError):
    pass


class SparsityViolationError(TwinObsError):
    pass


class OffDiagonalLeakError(TwinObsError):
    pass


class UnsupportedSpinError(TwinObsError):
    pass


class InputError(TwinObsError):
    """Malformed or inconsistent user input (files, CLI arguments)."""
