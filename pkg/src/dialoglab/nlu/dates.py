"""Recognition of date expressions in user text, relative to a reference day.

Handles the relative words used in damage reports ("yesterday", "gestern",
"3 days ago", "vor 2 Tagen") plus explicit day.month.year and ISO dates.
Damage dates lie in the past by definition, so anything resolving after the
reference day is an error rather than a value.
"""

from __future__ import annotations

import re
from datetime import date, timedelta


class FutureDateError(ValueError):
    """A recognized date expression resolved to a day after the reference."""

    def __init__(self, resolved: date):
        super().__init__(f"damage date in future: {resolved.isoformat()}")
        self.resolved = resolved


# "morgen" is "tomorrow" only when it is not the greeting "guten Morgen"
_RELATIVE = [
    # "day before yesterday" must be tried before plain "yesterday"
    (re.compile(r"\b(day before yesterday|vorgestern)\b", re.IGNORECASE), -2),
    (re.compile(r"\b(today|heute)\b", re.IGNORECASE), 0),
    (re.compile(r"\b(yesterday|gestern)\b", re.IGNORECASE), -1),
    (re.compile(r"(?<!guten )\b(tomorrow|morgen)\b", re.IGNORECASE), +1),
]
_DAYS_AGO = re.compile(r"\b(\d{1,3})\s+days?\s+ago\b", re.IGNORECASE)
_VOR_TAGEN = re.compile(r"\bvor\s+(\d{1,3})\s+tag(?:en|e)?\b", re.IGNORECASE)
_DOTTED = re.compile(r"\b(\d{1,2})\.(\d{1,2})\.(\d{2,4})\b")
_ISO = re.compile(r"\b(\d{4})-(\d{2})-(\d{2})\b")


def extract_date(text: str, reference_date: date) -> date | None:
    """First date expression in ``text`` resolved against ``reference_date``.

    Returns None when no expression is present (or it names an impossible
    calendar day); raises FutureDateError when it resolves past the reference.
    """
    resolved = _resolve(text, reference_date)
    if resolved is None:
        return None
    if resolved > reference_date:
        raise FutureDateError(resolved)
    return resolved


def _resolve(text: str, reference: date) -> date | None:
    for pattern, offset in _RELATIVE:
        if pattern.search(text):
            return reference + timedelta(days=offset)
    for pattern in (_DAYS_AGO, _VOR_TAGEN):
        m = pattern.search(text)
        if m:
            return reference - timedelta(days=int(m.group(1)))
    m = _DOTTED.search(text)
    if m:
        day, month, year = int(m.group(1)), int(m.group(2)), int(m.group(3))
        if year < 100:
            year += 2000
        return _checked_date(year, month, day)
    m = _ISO.search(text)
    if m:
        return _checked_date(int(m.group(1)), int(m.group(2)), int(m.group(3)))
    return None


def _checked_date(year: int, month: int, day: int) -> date | None:
    try:
        return date(year, month, day)
    except ValueError:
        return None
