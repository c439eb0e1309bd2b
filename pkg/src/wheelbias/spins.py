"""Spin-stream ingestion, serialization, and chronological splitting.

Two text formats are supported:

* ``plain`` -- one base-10 integer per line, LF or CRLF, optional trailing
  newline.
* ``csv``   -- header ``index,pocket``, one row per spin. The index column is
  informational only: ignored on read, monotone from 0 on write. CSV is the
  canonical interchange format.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import IO, Iterator, Sequence

import numpy as np

from .errors import EmptyInputError, LengthMismatchError, ParseError, RangeError
from .validation import as_outcome_array

PLAIN = "plain"
CSV = "csv"
_FORMATS = (PLAIN, CSV)

CSV_HEADER = ("index", "pocket")


@dataclass(frozen=True, eq=False)
class SpinSeries:
    """Chronological, immutable sequence of wheel outcomes (pocket ids 0-36)."""

    outcomes: np.ndarray
    source_label: str = ""

    def __post_init__(self):
        arr = as_outcome_array(self.outcomes).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "outcomes", arr)

    @property
    def length(self) -> int:
        return int(self.outcomes.size)

    def __len__(self) -> int:
        return self.length

    def __iter__(self) -> Iterator[int]:
        return iter(self.outcomes.tolist())

    def slice(self, start: int, stop: int) -> "SpinSeries":
        """Contiguous chronological sub-series (shares the source label)."""
        return SpinSeries(self.outcomes[start:stop], self.source_label)


@dataclass(frozen=True)
class DataSplit:
    """One in-sample block followed by ordered out-of-sample segments.

    Concatenating ``in_sample`` with the segments reproduces the original
    series element-wise.
    """

    in_sample: SpinSeries
    out_of_sample_segments: tuple[SpinSeries, ...]

    @property
    def segment_lengths(self) -> tuple[int, ...]:
        return tuple(len(seg) for seg in self.out_of_sample_segments)

    @property
    def anchored_window_lengths(self) -> tuple[int, ...]:
        """In-sample window size ahead of each segment when anchoring."""
        sizes = [len(self.in_sample)]
        for seg in self.out_of_sample_segments[:-1]:
            sizes.append(sizes[-1] + len(seg))
        return tuple(sizes)

    def flatten(self) -> np.ndarray:
        parts = [self.in_sample.outcomes]
        parts.extend(seg.outcomes for seg in self.out_of_sample_segments)
        return np.concatenate(parts)


def parse_spins(raw: str | IO[str], format: str = PLAIN) -> SpinSeries:
    """Parse a text stream of spin outcomes.

    Args:
        raw: Text or readable text stream.
        format: ``plain`` or ``csv``.

    Raises:
        ParseError: non-integer token (carries line and token).
        RangeError: value outside 0-36 (carries line and value).
        EmptyInputError: no spin rows.
    """
    if format not in _FORMATS:
        raise ValueError(f"unknown format {format!r}, expected one of {_FORMATS}")
    text = raw.read() if hasattr(raw, "read") else raw
    if format == PLAIN:
        outcomes = _parse_plain(text)
    else:
        outcomes = _parse_csv(text)
    if not outcomes:
        raise EmptyInputError("no spin rows in input")
    return SpinSeries(np.array(outcomes, dtype=np.int64))


def _parse_plain(text: str) -> list[int]:
    outcomes = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        token = line.strip()
        try:
            value = int(token)
        except ValueError:
            raise ParseError(lineno, token) from None
        if not 0 <= value <= 36:
            raise RangeError(value, line=lineno)
        outcomes.append(value)
    return outcomes


def _parse_csv(text: str) -> list[int]:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [(i, row) for i, row in enumerate(rows, start=1) if any(cell.strip() for cell in row)]
    if not rows:
        raise EmptyInputError("no rows in input")
    header_line, header = rows[0]
    if tuple(cell.strip().lower() for cell in header) != CSV_HEADER:
        raise ParseError(header_line, ",".join(header))
    outcomes = []
    for lineno, row in rows[1:]:
        if len(row) != 2:
            raise ParseError(lineno, ",".join(row))
        token = row[1].strip()
        try:
            value = int(token)
        except ValueError:
            raise ParseError(lineno, token) from None
        if not 0 <= value <= 36:
            raise RangeError(value, line=lineno)
        outcomes.append(value)
    return outcomes


def serialize_spins(series: SpinSeries, format: str = CSV) -> str:
    """Render a series in one of the interchange formats (inverse of parse)."""
    if format not in _FORMATS:
        raise ValueError(f"unknown format {format!r}, expected one of {_FORMATS}")
    if format == PLAIN:
        return "".join(f"{value}\n" for value in series.outcomes.tolist())
    lines = [",".join(CSV_HEADER)]
    lines.extend(f"{i},{value}" for i, value in enumerate(series.outcomes.tolist()))
    return "\n".join(lines) + "\n"


def split(series: SpinSeries, in_sample_len: int, segment_lens: Sequence[int]) -> DataSplit:
    """Cut a series into contiguous in-sample and out-of-sample slices.

    ``in_sample_len`` plus the segment lengths must equal the series length;
    all lengths must be positive.
    """
    lens = [int(n) for n in segment_lens]
    if int(in_sample_len) <= 0 or any(n <= 0 for n in lens):
        raise ValueError("all split lengths must be positive")
    claimed = int(in_sample_len) + sum(lens)
    if claimed != len(series):
        raise LengthMismatchError(
            f"lengths sum to {claimed} but the series holds {len(series)} spins"
        )
    cuts = np.cumsum([in_sample_len] + lens)
    in_sample = series.slice(0, int(cuts[0]))
    segments = tuple(
        series.slice(int(start), int(stop)) for start, stop in zip(cuts[:-1], cuts[1:])
    )
    return DataSplit(in_sample=in_sample, out_of_sample_segments=segments)
