"""Exception hierarchy shared by every module of :mod:`logiso`."""

from __future__ import annotations


class LogIsoError(ValueError):
    """Base class; the CLI maps every subclass to exit code 2."""

    kind = "error"


class UnknownAtom(LogIsoError):
    kind = "UnknownAtom"


class UnknownComponent(LogIsoError):
    kind = "UnknownComponent"


class AlgebraMismatch(LogIsoError):
    kind = "AlgebraMismatch"


class UndecidableTail(LogIsoError):
    """No implemented asymptotic rule decides the requested tail."""

    kind = "UndecidableTail"


class InfiniteMass(LogIsoError):
    kind = "InfiniteMass"


class DerivativeBounded(LogIsoError):
    kind = "DerivativeBounded"


class RowMismatch(LogIsoError):
    kind = "RowMismatch"

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class AtomMismatch(LogIsoError):
    kind = "AtomMismatch"


class RatioUnbounded(LogIsoError):
    kind = "RatioUnbounded"


class SchemaError(LogIsoError):
    """Malformed JSON input; ``path`` names the offending field."""

    kind = "SchemaError"

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message
