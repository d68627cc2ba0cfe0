"""Exception types shared across the package.

Every error carries a short machine-readable ``category`` so the command
line tool can map failures to stable exit codes.
"""


class EmconvError(Exception):
    """Base class for all package errors."""

    category = "internal"


class InvalidInputError(EmconvError, ValueError):
    """A physical parameter or argument violates its domain."""

    category = "invalid-input"


class SingularityError(EmconvError):
    """The linear response matrix is singular at the requested frequency."""

    category = "singularity"


class InitializationError(EmconvError):
    """Fit initialization failed (e.g. no resonance bracketed by the data)."""

    category = "initialization"


class ConfigError(EmconvError):
    """A configuration file or preset is missing or inconsistent."""

    category = "config"


class DataFormatError(EmconvError):
    """A data file does not match the documented schema."""

    category = "data-format"
