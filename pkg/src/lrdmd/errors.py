"""Exception and warning types shared across the package.

Two error families matter for the CLI exit-code contract: ValidationError
(bad input or usage, exit 2) and NumericalGuardError (a numerical safety
guard tripped, exit 3). Anything else is an internal error (exit 1).
"""


class LowRankDmdError(Exception):
    """Base class for all package errors."""


class ValidationError(LowRankDmdError, ValueError):
    """Invalid input data or arguments."""


class SnapshotFormatError(ValidationError):
    """Malformed snapshot CSV (ragged trajectories, bad grid, bad cells)."""


class NumericalGuardError(LowRankDmdError, RuntimeError):
    """A numerical safety guard refused to continue."""


class RankGuardError(NumericalGuardError):
    """Requested rank is not supported by the numerical rank of the data."""


class OverflowGuardError(NumericalGuardError):
    """A simulated trajectory exceeded the allowed magnitude."""


class RankDeficiencyWarning(UserWarning):
    """Data matrix is numerically rank-deficient; thresholded inverse used."""


class RankClampWarning(UserWarning):
    """Requested rank exceeded the usable rank and was clamped."""


class DegenerateModeWarning(UserWarning):
    """A spectral mode had to be dropped (zero eigenvalue or collapse)."""


class ReconstructionWarning(UserWarning):
    """Modal reconstruction produced a non-negligible imaginary part."""
