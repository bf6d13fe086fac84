class AttitudeICError(Exception):
    """Base class for package errors."""


class GraphFormatError(AttitudeICError, ValueError):
    """Malformed edge-list input."""

    def __init__(self, msg, lineno=None, path=None):
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"{lineno}: "
        elif where:
            where += " "
        super().__init__(where + msg)


class ValidationError(AttitudeICError, ValueError):
    """A parameter or value outside its allowed range."""


class SizeGuardError(AttitudeICError):
    """An exact/exhaustive computation refused because the instance is too large."""
