"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class CountsegError(Exception):
    """Base class for all countseg errors."""


class InputError(CountsegError):
    """Malformed or unreadable input data (CLI exit code 2)."""


class ArgumentError(CountsegError, ValueError):
    """Invalid argument to a library operation (CLI exit code 3)."""


class MemoryCapError(ArgumentError):
    """A run would allocate more than the configured memory cap."""


class DispersionError(CountsegError):
    """Dispersion estimation failed (CLI exit code 4).

    Carries per-window-width diagnostics in ``attempts``: a list of
    (h, windows_total, windows_valid) tuples, one per doubling.
    """

    def __init__(self, message: str, attempts=None):
        super().__init__(message)
        self.attempts = list(attempts) if attempts is not None else []


class InternalError(CountsegError):
    """Inconsistent internal state (malformed backtracking table, ...)."""
