"""Number formatting shared by every CSV writer: 12 significant digits."""

from __future__ import annotations

from typing import Iterable


def sig12(value) -> str:
    if isinstance(value, bool):
        raise TypeError("format booleans explicitly")
    if isinstance(value, int):
        return str(value)
    return "%.12g" % float(value)


def csv_line(values: Iterable) -> str:
    """One CSV row; strings pass through, numbers get sig12."""
    parts = []
    for v in values:
        parts.append(v if isinstance(v, str) else sig12(v))
    return ",".join(parts)
