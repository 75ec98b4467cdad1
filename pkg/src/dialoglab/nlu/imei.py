"""IMEI well-formedness: exactly 15 digits carrying a Luhn check digit."""

from __future__ import annotations


def luhn_checksum(digits: str) -> int:
    """Luhn sum mod 10 (0 means valid). Assumes ``digits`` is numeric."""
    total = 0
    for i, ch in enumerate(reversed(digits)):
        d = int(ch)
        if i % 2 == 1:
            d *= 2
            if d > 9:
                d -= 9
        total += d
    return total % 10


def validate_imei(digits: str) -> bool:
    return len(digits) == 15 and digits.isdigit() and luhn_checksum(digits) == 0


def imei_check_digit(body: str) -> str:
    """Check digit completing a 14-digit IMEI body."""
    if len(body) != 14 or not body.isdigit():
        raise ValueError("IMEI body must be 14 digits")
    return str((10 - luhn_checksum(body + "0")) % 10)
