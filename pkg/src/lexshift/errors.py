"""Exception types shared across the package."""


class LexshiftError(Exception):
    """Base class for package-specific failures."""


class ParseError(LexshiftError, ValueError):
    """A file could not be parsed; carries the path and 1-based line number."""

    def __init__(self, message, path=None, line_no=None):
        self.path = path
        self.line_no = line_no
        where = ""
        if path is not None:
            where = f"{path}:"
        if line_no is not None:
            where += f"{line_no}:"
        super().__init__(f"{where} {message}" if where else message)


class ValidationError(LexshiftError, ValueError):
    """Well-formed input that violates a documented contract."""


class OOVError(LexshiftError, KeyError):
    """A token is absent from the embedding vocabulary."""

    def __init__(self, token):
        self.token = token
        super().__init__(token)

    def __str__(self):
        return f"token not in embedding vocabulary: {self.token!r}"


class TrainingError(LexshiftError, RuntimeError):
    """Training hit a non-recoverable numeric or data problem."""


class DegenerateVarianceError(LexshiftError, ValueError):
    """A statistic is undefined because the sample has zero spread."""
