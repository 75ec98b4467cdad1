"""Intent and entity catalog: the data-driven definition of what the bot understands.

Catalogs are human-editable YAML files listing intents (trigger patterns with
weights, extractable entities, example utterances) and entities (enumerated
value/synonym sets, dates, digit strings, free text, capture patterns). A
catalog is immutable after load.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import yaml

ENTITY_KINDS = ("enumerated", "date", "digit_string", "free_text", "capture")

DEFAULT_MATCH_THRESHOLD = 0.5


class CatalogError(ValueError):
    """Catalog file violates the schema; message names the offending element."""


@dataclass(frozen=True, slots=True)
class PatternSpec:
    regex: re.Pattern
    weight: float = 1.0


@dataclass(frozen=True, slots=True)
class IntentSpec:
    """One recognizable message function with its trigger evidence."""

    name: str
    patterns: tuple[PatternSpec, ...]
    entities: tuple[str, ...] = ()
    examples: tuple[str, ...] = ()

    @property
    def total_weight(self) -> float:
        return sum(p.weight for p in self.patterns)


@dataclass(frozen=True, slots=True)
class EntitySpec:
    """One extractable slot type.

    enumerated   values: canonical -> synonyms, matched word-bounded, longest first
    date         resolved against the message's reference day
    digit_string runs of digits (separators stripped) within [min_digits, max_digits]
    free_text    the whole trimmed message
    capture      regex with one group; the group is the value
    """

    name: str
    kind: str
    values: dict[str, tuple[str, ...]] = field(default_factory=dict)
    min_digits: int = 1
    max_digits: int = 64
    pattern: re.Pattern | None = None


@dataclass(frozen=True, slots=True)
class Catalog:
    language: str
    intents: dict[str, IntentSpec]
    entities: dict[str, EntitySpec]
    threshold: float = DEFAULT_MATCH_THRESHOLD

    def with_entity(self, spec: EntitySpec) -> "Catalog":
        entities = dict(self.entities)
        entities[spec.name] = spec
        return Catalog(self.language, self.intents, entities, self.threshold)


def load_catalog(path: str | Path, extra_entities: tuple[EntitySpec, ...] = ()) -> Catalog:
    """Load a catalog file; ``extra_entities`` supplies entities whose value
    sets live outside the file (e.g. the device catalog)."""
    try:
        raw = yaml.safe_load(Path(path).read_text("utf-8"))
    except yaml.YAMLError as exc:
        raise CatalogError(f"catalog {path}: invalid YAML ({exc})")
    if not isinstance(raw, dict):
        raise CatalogError(f"catalog {path}: top level must be a mapping")
    return build_catalog(raw, source=str(path), extra_entities=extra_entities)


def build_catalog(
    raw: dict, source: str = "<memory>", extra_entities: tuple[EntitySpec, ...] = ()
) -> Catalog:
    language = raw.get("language", "en")
    threshold = float(raw.get("threshold", DEFAULT_MATCH_THRESHOLD))

    entities: dict[str, EntitySpec] = {spec.name: spec for spec in extra_entities}
    for name, spec in (raw.get("entities") or {}).items():
        entities[name] = _parse_entity(name, spec or {})

    intents: dict[str, IntentSpec] = {}
    for name, spec in (raw.get("intents") or {}).items():
        intents[name] = _parse_intent(name, spec or {}, entities)
    if not intents:
        raise CatalogError(f"catalog {source}: no intents defined")

    return Catalog(language=language, intents=intents, entities=entities, threshold=threshold)


def _parse_intent(name: str, spec: dict, entities: dict[str, EntitySpec]) -> IntentSpec:
    patterns = []
    for item in spec.get("patterns") or []:
        if isinstance(item, str):
            text, weight = item, 1.0
        elif isinstance(item, dict):
            text, weight = item.get("pattern", ""), float(item.get("weight", 1.0))
        else:
            raise CatalogError(f"intent {name!r}: pattern entries must be strings or mappings")
        if not text:
            raise CatalogError(f"intent {name!r}: empty pattern")
        if weight <= 0:
            raise CatalogError(f"intent {name!r}: pattern weight must be positive")
        patterns.append(PatternSpec(_compile(text, f"intent {name!r}"), weight))
    if not patterns:
        raise CatalogError(f"intent {name!r}: needs at least one pattern")

    extractable = tuple(spec.get("entities") or ())
    for entity in extractable:
        if entity not in entities:
            raise CatalogError(f"intent {name!r}: unknown entity {entity!r}")
    return IntentSpec(
        name=name,
        patterns=tuple(patterns),
        entities=extractable,
        examples=tuple(spec.get("examples") or ()),
    )


def _parse_entity(name: str, spec: dict) -> EntitySpec:
    kind = spec.get("kind")
    if kind not in ENTITY_KINDS:
        raise CatalogError(f"entity {name!r}: unknown kind {kind!r}")
    if kind == "enumerated":
        values_raw = spec.get("values") or {}
        if not values_raw:
            raise CatalogError(f"entity {name!r}: enumerated entity needs values")
        values: dict[str, tuple[str, ...]] = {}
        seen: dict[str, str] = {}
        for canonical, synonyms in values_raw.items():
            # canonical doubles as synonym only when none are listed
            synonyms = tuple(synonyms or ()) or (canonical.replace("_", " "),)
            for syn in synonyms:
                folded = syn.casefold()
                if seen.get(folded, canonical) != canonical:
                    raise CatalogError(
                        f"entity {name!r}: synonym {syn!r} maps to both "
                        f"{seen[folded]!r} and {canonical!r}"
                    )
                seen[folded] = canonical
            values[canonical] = synonyms
        return EntitySpec(name=name, kind=kind, values=values)
    if kind == "digit_string":
        return EntitySpec(
            name=name,
            kind=kind,
            min_digits=int(spec.get("min_digits", 1)),
            max_digits=int(spec.get("max_digits", 64)),
        )
    if kind == "capture":
        pattern = spec.get("pattern")
        if not pattern:
            raise CatalogError(f"entity {name!r}: capture entity needs a pattern")
        compiled = _compile(pattern, f"entity {name!r}")
        if compiled.groups < 1:
            raise CatalogError(f"entity {name!r}: capture pattern needs one group")
        return EntitySpec(name=name, kind=kind, pattern=compiled)
    return EntitySpec(name=name, kind=kind)


def _compile(pattern: str, where: str) -> re.Pattern:
    try:
        return re.compile(pattern, re.IGNORECASE)
    except re.error as exc:
        raise CatalogError(f"{where}: bad regex {pattern!r} ({exc})")
