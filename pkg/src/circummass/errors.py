"""Exception hierarchy shared by all modules."""


class GeometryError(Exception):
    """Base class for every error raised by circummass."""


class SingularMatrix(GeometryError):
    pass


class DimensionMismatch(GeometryError, ValueError):
    pass


class DegenerateSimplex(GeometryError):
    pass


class DegenerateCone(DegenerateSimplex):
    """A cone simplex built over a cycle term is metrically degenerate.

    Pick another apex or perturb the current one.
    """


class OrientationError(GeometryError):
    pass


class UnsupportedDimension(GeometryError):
    pass


class ParseError(GeometryError):
    """Malformed input text. ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class ValidationError(GeometryError, ValueError):
    pass
