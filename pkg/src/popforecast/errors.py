"""Exception types shared by every layer.

Each error carries the process exit status the CLI reports for it:
1 for malformed input or out-of-domain values, 2 for windows that do not
fit the available data.
"""


class ForecastError(ValueError):
    exit_code = 1


class ParseError(ForecastError):
    """A CSV row could not be read."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class StructuralError(ForecastError):
    """Series shape is wrong (gaps, duplicates, no data)."""


class DomainError(ForecastError):
    """A value lies outside its admissible domain."""


class RangeError(ForecastError):
    """A requested window falls outside the observed periods."""

    exit_code = 2


class InsufficientDataError(ForecastError):
    """Too few observations to fit a line with residual degrees of freedom."""

    exit_code = 2
