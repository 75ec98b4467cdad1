"""Deterministic rule-based message understanding.

Scores every catalog intent by the weight fraction of its patterns that match
the (trimmed, case-folded) text, picks the best one above the match threshold,
and extracts exactly the entities that intent declares. No network, no
statistics: the same text and catalog always yield the same result.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date
from typing import Callable, Mapping

from .catalog import Catalog, EntitySpec
from .dates import FutureDateError, extract_date

FALLBACK_INTENT = "fallback"

_DIGIT_RUN = re.compile(r"\+?\d(?:[\d\s\-/().]*\d)?")


@dataclass(frozen=True, slots=True)
class MessageUnderstanding:
    """Everything the bot understood about one user message."""

    intent: str
    confidence: float
    parameters: Mapping[str, str] = field(default_factory=dict)
    raw_text: str = ""
    media_kind: str | None = None

    def __post_init__(self) -> None:
        if not self.intent:
            raise ValueError("intent must be non-empty")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of range: {self.confidence}")


def fallback_understanding(raw_text: str = "") -> MessageUnderstanding:
    return MessageUnderstanding(FALLBACK_INTENT, 0.0, {}, raw_text)


# The pluggable understanding interface: anything mapping (text, reference
# day) to a MessageUnderstanding can replace the built-in catalog scorer,
# e.g. an adapter for an external NLU service.
Understander = Callable[[str, date], MessageUnderstanding]


def catalog_understander(catalog: Catalog) -> Understander:
    """The built-in deterministic understander bound to one catalog."""

    def understander(text: str, reference_date: date) -> MessageUnderstanding:
        return understand(text, catalog, reference_date)

    return understander


def understand(
    text: str,
    catalog: Catalog,
    reference_date: date | None = None,
) -> MessageUnderstanding:
    """Highest-scoring intent with its entity parameters; total, never raises.

    ``reference_date`` anchors relative date expressions; it defaults to the
    current day, so callers that need determinism must pass the message day.
    """
    raw = text.strip()
    if not raw:
        return fallback_understanding(raw)
    reference = reference_date or date.today()

    best_name: str | None = None
    best_score = 0.0
    for name in sorted(catalog.intents):  # ties break to the smallest name
        spec = catalog.intents[name]
        matched = sum(p.weight for p in spec.patterns if p.regex.search(raw))
        score = matched / spec.total_weight
        if score > best_score:
            best_name, best_score = name, score

    if best_name is None or best_score < catalog.threshold:
        return fallback_understanding(raw)

    parameters = {}
    for entity_name in catalog.intents[best_name].entities:
        value = extract_entity(catalog.entities[entity_name], raw, reference)
        if value is not None:
            parameters[entity_name] = value
    return MessageUnderstanding(best_name, best_score, parameters, raw)


def extract_entity(spec: EntitySpec, text: str, reference_date: date) -> str | None:
    """Normalized value of one entity in ``text``, or None when absent.

    Date expressions that resolve to the future are treated as absent here;
    flows that must reject them call ``extract_date`` directly.
    """
    if spec.kind == "enumerated":
        return _extract_enumerated(spec, text)
    if spec.kind == "date":
        try:
            resolved = extract_date(text, reference_date)
        except FutureDateError:
            return None
        return resolved.isoformat() if resolved else None
    if spec.kind == "digit_string":
        for run in digit_runs(text):
            if spec.min_digits <= len(run) <= spec.max_digits:
                return run
        return None
    if spec.kind == "free_text":
        return text.strip() or None
    if spec.kind == "capture":
        m = spec.pattern.search(text)
        return m.group(1).strip() if m else None
    raise ValueError(f"unknown entity kind {spec.kind!r}")


def digit_runs(text: str) -> list[str]:
    """Digit sequences with separators stripped, in order of occurrence."""
    return ["".join(c for c in m.group() if c.isdigit()) for m in _DIGIT_RUN.finditer(text)]


def _extract_enumerated(spec: EntitySpec, text: str) -> str | None:
    # longest synonym across all values first, so "iphone 8 plus" is not
    # swallowed by "iphone 8"
    pairs = [
        (syn, canonical)
        for canonical, synonyms in spec.values.items()
        for syn in synonyms
    ]
    pairs.sort(key=lambda p: len(p[0]), reverse=True)
    for synonym, canonical in pairs:
        if re.search(rf"(?<!\w){re.escape(synonym)}(?!\w)", text, re.IGNORECASE):
            return canonical
    return None
