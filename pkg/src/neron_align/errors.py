"""Exception hierarchy shared by every module."""

from __future__ import annotations


class NeronAlignError(Exception):
    """Base class; everything raised on purpose derives from this."""


class UnitLabel(NeronAlignError, ValueError):
    """An identity label showed up where a non-unit is required."""


class EmptyInput(NeronAlignError, ValueError):
    pass


class InvalidGraph(NeronAlignError, ValueError):
    pass


class UnknownGenerator(NeronAlignError, KeyError):
    pass


class UnknownVertex(NeronAlignError, KeyError):
    pass


class GraphNotConnected(NeronAlignError, ValueError):
    pass


class NotAligned(NeronAlignError):
    """Carries the alignment verdict whose witness explains the failure."""

    def __init__(self, message: str, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class NotCartier(NeronAlignError):
    def __init__(self, message: str, edge=None):
        super().__init__(message)
        self.edge = edge


class NotTCartier(NotCartier):
    pass


class NoZeroVertex(NeronAlignError, ValueError):
    pass


class DegenerateTrait(NeronAlignError, ValueError):
    pass


class ZeroThicknessEdge(NeronAlignError, ValueError):
    def __init__(self, message: str, edges=()):
        super().__init__(message)
        self.edges = tuple(edges)


# series / Newton polygon errors

class EmptySide(NeronAlignError, ValueError):
    pass


class NoCorner(NeronAlignError, ValueError):
    pass


class NotInA(NeronAlignError, ValueError):
    def __init__(self, message: str, index=None, valuation=None):
        super().__init__(message)
        self.index = index
        self.valuation = valuation


class WindowTooSmall(NeronAlignError, ValueError):
    pass


class UnsupportedCoefficient(NeronAlignError, ValueError):
    """The exact coefficient model cannot invert this element."""


class SchemaError(NeronAlignError, ValueError):
    def __init__(self, message: str, pointer: str = ""):
        # "" is the JSON pointer of the whole document
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer
        self.detail = message
