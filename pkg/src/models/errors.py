class CbsError(Exception):
    """Base class of every error raised by the simulator."""


class UnknownLevel(CbsError, KeyError):
    def __init__(self, level, manifold: str):
        super().__init__(f"{manifold} level F={level} is not part of the level scheme")
        self.level = level
        self.manifold = manifold

    def __str__(self) -> str:
        return self.args[0]


class ConfigError(CbsError, ValueError):
    """Invalid run configuration or invalid model parameters."""

    def __init__(self, message: str, line: int = None, column: int = None):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column


class DegeneratePath(CbsError):
    """Two atoms of a scattering path are closer than the near-field cutoff."""


class ZeroCrossSection(CbsError):
    """The incident-light cross section vanished, so no density reproduces the optical depth."""


class InvariantViolation(CbsError):
    """A computed result broke one of its invariants."""
