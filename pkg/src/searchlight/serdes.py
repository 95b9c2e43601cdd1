"""Utilities for reading and writing scenario files, CSV series and JSON summaries.

Examples: Typical Usage
    >>> from searchlight import serdes
    >>>
    >>> serdes.decode(b"abc")
    'abc'
    >>> serdes.format_float(0.1)
    '0.10000000000000001'
    >>> import datetime
    >>> serdes.isoformat(datetime.timedelta(seconds=90))
    'PT1M30S'
"""

from __future__ import annotations

import contextlib
import datetime
import io
import logging
import math
import os
import pathlib
import tempfile
import typing as t

import pendulum
from more_itertools import peekable

from searchlight import constants

__all__ = (
    "decode",
    "format_float",
    "isoformat",
    "iteritems",
    "atomic_write",
    "write_csv",
    "write_bytes",
    "csv_text",
    "MarshalledValueT",
)

logger = logging.getLogger(__name__)

MarshalledValueT: t.TypeAlias = (
    "dict[str, MarshalledValueT] | list[MarshalledValueT] | str | int | float | bool | None"
)
"""A JSON-native value."""


def decode(val: t.Any, *, encoding: str = constants.DEFAULT_ENCODING) -> t.Any:
    """Decode a bytes-like object into a str.

    Note:
        If a non-bytes-like object is passed, it will be returned unchanged.
    """
    val = val.tobytes() if isinstance(val, memoryview) else val
    if isinstance(val, (bytes, bytearray)):
        return val.decode(encoding)
    return val


def format_float(value: float, digits: int = constants.CSV_SIGNIFICANT_DIGITS) -> str:
    """Format a float with a fixed number of significant digits.

    Seventeen digits always round-trip a binary64 value exactly.

    Examples:
        >>> from searchlight import serdes
        >>> serdes.format_float(2.0)
        '2'
        >>> serdes.format_float(float("inf"))
        'inf'
    """
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def isoformat(delta: datetime.timedelta | float) -> str:
    """Format an elapsed time as an ISO-8601 duration.

    Floats are read as seconds.

    Examples:
        >>> from searchlight import serdes
        >>> serdes.isoformat(0.25)
        'PT0.250000S'
        >>> serdes.isoformat(0)
        'PT0S'
    """
    if not isinstance(delta, datetime.timedelta):
        delta = datetime.timedelta(seconds=delta)
    dur = pendulum.duration(
        days=delta.days, seconds=delta.seconds, microseconds=delta.microseconds
    )
    datepart = f"{dur.remaining_days}D" if dur.remaining_days else ""
    seconds = (
        f"{dur.remaining_seconds}.{dur.microseconds:06}"
        if dur.microseconds
        else dur.remaining_seconds
    )
    timepart = "".join(
        f"{p}{s}" for p, s in ((dur.hours, "H"), (dur.minutes, "M"), (seconds, "S")) if p
    )
    return f"P{datepart}T{timepart or '0S'}"


def iteritems(val: t.Any) -> t.Iterator[tuple[t.Any, t.Any]]:
    """Iterate over (key, value) pairs of a mapping or an iterable of pairs.

    Examples:
        >>> from searchlight import serdes
        >>> [*serdes.iteritems({"a": 1})]
        [('a', 1)]
        >>> [*serdes.iteritems(iter([("b", 2)]))]
        [('b', 2)]

    Raises:
        TypeError: If `val` is neither a mapping nor an iterable of pairs.
    """
    if isinstance(val, t.Mapping):
        return iter(val.items())
    it = peekable(val)
    peek = it.peek(None)
    if peek is not None and not (isinstance(peek, (tuple, list)) and len(peek) == 2):
        raise TypeError(f"{val!r} is not a mapping or an iterable of pairs")
    return iter(it)


@contextlib.contextmanager
def atomic_write(
    path: str | os.PathLike, *, encoding: str = constants.DEFAULT_ENCODING
) -> t.Iterator[io.TextIOWrapper]:
    """Write to a temporary file beside `path`, then rename it into place.

    Readers never observe a partially written file. The temporary file is removed
    if the body raises.
    """
    target = pathlib.Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding=encoding, newline="") as fh:
            yield fh
        os.replace(tmp, target)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise
    logger.debug("Wrote %s", target)


def csv_text(header: t.Sequence[str], rows: t.Iterable[t.Sequence[float]]) -> str:
    """Render a header and float rows as CSV text with `\\n` line endings.

    Examples:
        >>> from searchlight import serdes
        >>> print(serdes.csv_text(["t", "P"], [(0.0, 0.5)]), end="")
        t,P
        0,0.5
    """
    lines = [",".join(header)]
    lines.extend(",".join(format_float(float(v)) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_csv(
    path: str | os.PathLike,
    header: t.Sequence[str],
    rows: t.Iterable[t.Sequence[float]],
) -> pathlib.Path:
    """Atomically write a CSV file of floats."""
    text = csv_text(header, rows)
    with atomic_write(path) as fh:
        fh.write(text)
    return pathlib.Path(path)


def write_bytes(path: str | os.PathLike, data: bytes) -> pathlib.Path:
    """Atomically write encoded bytes, e.g. a JSON summary."""
    with atomic_write(path) as fh:
        fh.write(decode(data))
    return pathlib.Path(path)
