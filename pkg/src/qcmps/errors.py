"""Exception types shared across the package."""


class QcmpsError(Exception):
    """Base class for all errors raised by this package."""


class FcidumpError(QcmpsError):
    """Malformed FCIDUMP content (bad header, bad record, bad index)."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ValidationError(QcmpsError):
    """Invalid argument or configuration value."""


class ConvergenceError(QcmpsError):
    """An iterative solver exhausted its budget before reaching tolerance."""


class DiagnosticsError(QcmpsError):
    """A runtime self-check failed (non-Hermitian residue, broken invariant)."""
