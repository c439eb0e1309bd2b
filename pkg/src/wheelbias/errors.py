"""Exception types raised by the package.

Everything subclasses :class:`ValueError` so callers that do not care about
the distinction can catch the builtin.
"""

from __future__ import annotations


class ParseError(ValueError):
    """A token in the input stream is not a base-10 integer."""

    def __init__(self, line: int, token: str):
        self.line = line
        self.token = token
        super().__init__(f"line {line}: cannot parse {token!r} as an integer")


class RangeError(ValueError):
    """A pocket value lies outside the wheel's 0-36 range."""

    def __init__(self, value: int, line: int | None = None):
        self.value = value
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}pocket {value} outside 0-36")


class EmptyInputError(ValueError):
    """The input stream contains no spin rows."""


class LengthMismatchError(ValueError):
    """Requested split lengths do not add up to the series length."""


class EmptySeriesError(ValueError):
    """A statistic was requested over a series with no spins."""


class BurnInTooLargeError(ValueError):
    """Burn-in leaves no path values to aggregate."""


class InsufficientDataError(ValueError):
    """Too few observations for a valid chi-square test."""


class EmptySegmentError(ValueError):
    """A backtest was requested over an empty spin segment."""


class EmptySequenceError(ValueError):
    """An average was requested over an empty stake sequence."""


class NonStationaryError(ValueError):
    """The fitted lag-1 coefficient is outside (0, 1); no mean reversion."""


class InvalidParamsError(ValueError):
    """Process parameters violate their domain constraints."""


class MassOverflowError(ValueError):
    """Probability overrides assign more than the available unit mass."""
