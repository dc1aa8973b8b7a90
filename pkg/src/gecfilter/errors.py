"""Exception types shared across the toolkit."""

from __future__ import annotations


class GecFilterError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(GecFilterError):
    """A parameter or configuration value is missing or out of range."""


class InvalidEditError(GecFilterError):
    """An edit has an impossible span or falls outside its source sentence."""


class InvalidEditSetError(GecFilterError):
    """A collection of edits violates ordering or overlap constraints."""


class M2ParseError(GecFilterError):
    """Malformed M2 text. Carries the 1-based line number of the offence."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class SerializationError(GecFilterError):
    """A sentence cannot be embedded in, or recovered from, training text."""


class CorrectorError(GecFilterError):
    """An external corrector process failed.

    Captured stdout/stderr and the fold index, when known, ride along for
    diagnostics.
    """

    def __init__(self, message: str, fold: int | None = None,
                 stdout: str = "", stderr: str = ""):
        detail = message if fold is None else f"fold {fold}: {message}"
        if stderr.strip():
            detail += f" [stderr: {stderr.strip()[-500:]}]"
        super().__init__(detail)
        self.fold = fold
        self.stdout = stdout
        self.stderr = stderr


class ProtocolError(CorrectorError):
    """An external process violated the line-oriented file protocol."""


class ScorerError(GecFilterError):
    """An external language-model scorer died or replied with garbage."""
