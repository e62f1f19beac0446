"""PDF date strings (``D:YYYYMMDDHHmmSSOHH'mm'``) and XMP ISO-8601 dates."""

from __future__ import annotations

import calendar
import re
from datetime import datetime, timedelta, timezone

_PDF_DATE = re.compile(
    r"D:(?P<Y>\d{4})(?P<M>\d{2})?(?P<D>\d{2})?(?P<h>\d{2})?(?P<m>\d{2})?(?P<s>\d{2})?"
    r"(?:(?P<z>Z)(?:00'?(?:00'?)?)?|(?P<sign>[+-])(?P<tzh>\d{2})(?:'(?:(?P<tzm>\d{2})'?)?)?)?\Z",
    re.ASCII,
)
_XMP_DATE = re.compile(
    r"(?P<Y>\d{4})(?:-(?P<M>\d{2})(?:-(?P<D>\d{2})"
    r"(?:T(?P<h>\d{2}):(?P<m>\d{2})(?::(?P<s>\d{2})(?:\.\d+)?)?"
    r"(?:(?P<z>Z)|(?P<sign>[+-])(?P<tzh>\d{2}):(?P<tzm>\d{2}))?)?)?)?\Z",
    re.ASCII,
)


def _build(m: re.Match) -> datetime | None:
    g = m.groupdict()
    year = int(g["Y"])
    month = int(g["M"] or 1)
    day = int(g["D"] or 1)
    hour = int(g["h"] or 0)
    minute = int(g["m"] or 0)
    second = int(g["s"] or 0)
    if not (1 <= month <= 12 and year >= 1):
        return None
    if not 1 <= day <= calendar.monthrange(year, month)[1]:
        return None
    if hour > 23 or minute > 59 or second > 59:
        return None
    tz = None
    if g["z"]:
        tz = timezone.utc
    elif g["sign"]:
        tzh, tzm = int(g["tzh"]), int(g["tzm"] or 0)
        if tzh > 23 or tzm > 59:
            return None
        delta = timedelta(hours=tzh, minutes=tzm)
        tz = timezone(delta if g["sign"] == "+" else -delta)
    return datetime(year, month, day, hour, minute, second, tzinfo=tz)


def parse_pdf_date(text: str) -> datetime | None:
    """Parse a PDF date string; ``None`` when it breaks the grammar.

    Fields after the year are optional but must appear in order, and the
    ``D:`` prefix is required. The result is naive when the string has no
    time-zone designator.
    """
    m = _PDF_DATE.match(text)
    return _build(m) if m else None


def parse_xmp_date(text: str) -> datetime | None:
    m = _XMP_DATE.match(text.strip())
    return _build(m) if m else None


def to_utc(dt: datetime) -> datetime:
    """Second-granularity UTC instant; naive values are taken as UTC."""
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    try:
        return dt.astimezone(timezone.utc).replace(microsecond=0)
    except OverflowError:
        # year 1 or 9999 shifted past the calendar edge
        return dt.replace(microsecond=0)


def format_xmp_date(dt: datetime) -> str:
    text = f"{dt.year:04d}-{dt.month:02d}-{dt.day:02d}T{dt.hour:02d}:{dt.minute:02d}:{dt.second:02d}"
    off = dt.utcoffset()
    if off is None:
        return text
    if off == timedelta(0):
        return text + "Z"
    sign = "+" if off >= timedelta(0) else "-"
    minutes = abs(int(off.total_seconds())) // 60
    return f"{text}{sign}{minutes // 60:02d}:{minutes % 60:02d}"


def format_pdf_date(dt: datetime) -> str:
    text = f"D:{dt.year:04d}{dt.month:02d}{dt.day:02d}{dt.hour:02d}{dt.minute:02d}{dt.second:02d}"
    off = dt.utcoffset()
    if off is None:
        return text
    if off == timedelta(0):
        return text + "Z"
    sign = "+" if off >= timedelta(0) else "-"
    minutes = abs(int(off.total_seconds())) // 60
    return f"{text}{sign}{minutes // 60:02d}'{minutes % 60:02d}'"
