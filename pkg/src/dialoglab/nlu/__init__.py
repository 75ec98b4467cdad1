"""Deterministic, offline natural-language understanding."""

from .catalog import Catalog, CatalogError, EntitySpec, IntentSpec, build_catalog, load_catalog
from .dates import FutureDateError, extract_date
from .emoji import contains_emoji, emoji_sentiment
from .engine import (
    FALLBACK_INTENT,
    MessageUnderstanding,
    Understander,
    catalog_understander,
    digit_runs,
    extract_entity,
    fallback_understanding,
    understand,
)
from .imei import imei_check_digit, luhn_checksum, validate_imei

__all__ = [
    "Catalog",
    "CatalogError",
    "EntitySpec",
    "FALLBACK_INTENT",
    "FutureDateError",
    "IntentSpec",
    "MessageUnderstanding",
    "Understander",
    "build_catalog",
    "catalog_understander",
    "contains_emoji",
    "digit_runs",
    "emoji_sentiment",
    "extract_date",
    "extract_entity",
    "fallback_understanding",
    "imei_check_digit",
    "load_catalog",
    "luhn_checksum",
    "understand",
    "validate_imei",
]
