"""Exception hierarchy.

Errors split into two families so the CLI can map them onto exit codes:
``ValidationError`` (bad files, bad configuration; exit 2) and
``DomainError`` (numerically invalid arguments; exit 3).
"""


class OrdineqError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(OrdineqError, ValueError):
    pass


class ParseError(ValidationError):
    """A malformed input file. The message names the file and 1-based line."""

    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        super().__init__(f"{self.path}:{line}: {message}")


class ConfigError(ValidationError):
    pass


class DomainError(OrdineqError, ValueError):
    pass


class DimensionError(DomainError):
    pass


class InsufficientDrawsError(DomainError):
    pass


class DegenerateSampleError(DomainError):
    pass
