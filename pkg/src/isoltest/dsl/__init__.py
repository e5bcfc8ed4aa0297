"""Text formats: SoC parameters, test purposes, constraint models, intents and suites."""

from .diagnostics import Diagnostic, DslError, SourceSpan

__all__ = ["Diagnostic", "DslError", "SourceSpan"]
