"""Response generation: formality-aware text templates.

German distinguishes the informal "du" and the formal "Sie"; every template
ships both variants and the active formality level picks one. English
template files usually collapse the two. Variant selection within a level is
seeded, so replays are bit-exact while live conversations still rotate
phrasings.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from pathlib import Path

import yaml

from .messages import ChatAction

FORMAL = "formal"
INFORMAL = "informal"
LEVELS = (FORMAL, INFORMAL)


class TemplateError(ValueError):
    """Template table violates its schema; message names the template id."""


@dataclass(frozen=True, slots=True)
class Formality:
    """Address level plus how it was established."""

    level: str
    source: str = "default"  # default | detected | explicit

    def __post_init__(self) -> None:
        if self.level not in LEVELS:
            raise ValueError(f"unknown formality level {self.level!r}")
        if self.source not in ("default", "detected", "explicit"):
            raise ValueError(f"unknown formality source {self.source!r}")


# Formal "Sie" is only meaningful mid-sentence and capitalized; sentence-initial
# "Sie" is indistinguishable from the pronoun "sie" (she/they).
_INFORMAL = re.compile(r"\b(du|dich|dir|dein\w*)\b", re.IGNORECASE)
_FORMAL_TOKEN = re.compile(r"\b(Sie|Ihnen)\b")

DEFAULT_FORMALITY = Formality(FORMAL, "default")


def detect_formality(text: str) -> Formality | None:
    """Formality addressed to the bot, or None when the text carries no signal."""
    if _INFORMAL.search(text):
        return Formality(INFORMAL, "detected")
    for m in _FORMAL_TOKEN.finditer(text):
        prefix = text[: m.start()].rstrip()
        if prefix and prefix[-1] not in ".!?":
            return Formality(FORMAL, "detected")
    return None


@dataclass(frozen=True, slots=True)
class ResponseTemplate:
    id: str
    variants: dict[str, tuple[str, ...]]  # level -> phrasings
    required_placeholders: frozenset[str]


def _placeholders(text: str) -> set[str]:
    return {name for _, name, _, _ in string.Formatter().parse(text) if name}


class TemplateTable:
    """Immutable template collection with value labels for one language."""

    def __init__(self, templates: dict[str, ResponseTemplate], labels: dict[str, str], language: str = "en"):
        self.templates = templates
        self.labels = labels
        self.language = language

    def __contains__(self, template_id: str) -> bool:
        return template_id in self.templates

    def label(self, value: str) -> str:
        """Human wording for a normalized slot value (falls back to the value)."""
        return self.labels.get(value, value)

    def render(self, template_id: str, formality: str, fills: dict[str, str] | None = None, seed: int = 0) -> str:
        fills = fills or {}
        template = self.templates.get(template_id)
        if template is None:
            raise TemplateError(f"unknown template id {template_id!r}")
        missing = template.required_placeholders - set(fills)
        if missing:
            raise TemplateError(f"template {template_id!r}: missing placeholders {sorted(missing)}")
        variants = template.variants[formality]
        text = variants[seed % len(variants)]
        return text.format(**{k: fills[k] for k in template.required_placeholders})

    def say(
        self,
        template_id: str,
        formality: str,
        fills: dict[str, str] | None = None,
        seed: int = 0,
        **metadata: str,
    ) -> ChatAction:
        """Rendered send_text action, tagged with its template id and variant."""
        text = self.render(template_id, formality, fills, seed)
        variant = seed % len(self.templates[template_id].variants[formality])
        meta = {"template_id": template_id, "variant": str(variant), **metadata}
        return ChatAction("send_text", text=text, metadata=meta)

    def lint(self) -> list[str]:
        """Render every template under both formalities with dummy fills."""
        problems = []
        for template_id, template in sorted(self.templates.items()):
            dummy = {name: "x" for name in template.required_placeholders}
            for level in LEVELS:
                for seed in range(len(template.variants[level])):
                    try:
                        self.render(template_id, level, dummy, seed)
                    except Exception as exc:  # lint collects, never raises
                        problems.append(f"{template_id}[{level}#{seed}]: {exc}")
        return problems


def load_templates(path: str | Path) -> TemplateTable:
    try:
        raw = yaml.safe_load(Path(path).read_text("utf-8"))
    except yaml.YAMLError as exc:
        raise TemplateError(f"templates {path}: invalid YAML ({exc})")
    if not isinstance(raw, dict) or "templates" not in raw:
        raise TemplateError(f"templates {path}: missing 'templates' mapping")

    templates: dict[str, ResponseTemplate] = {}
    for template_id, spec in raw["templates"].items():
        templates[template_id] = _parse_template(template_id, spec or {})
    labels = {str(k): str(v) for k, v in (raw.get("labels") or {}).items()}
    return TemplateTable(templates, labels, language=raw.get("language", "en"))


def _parse_template(template_id: str, spec: dict) -> ResponseTemplate:
    if "text" in spec:  # shorthand: one phrasing list for both levels
        shared = _variant_list(template_id, spec["text"])
        variants = {FORMAL: shared, INFORMAL: shared}
    else:
        variants = {}
        for level in LEVELS:
            if level not in spec:
                raise TemplateError(f"template {template_id!r}: missing {level} variant")
            variants[level] = _variant_list(template_id, spec[level])

    declared = frozenset(spec.get("placeholders") or ())
    for level, phrasings in variants.items():
        for text in phrasings:
            found = _placeholders(text)
            if found != declared:
                raise TemplateError(
                    f"template {template_id!r} [{level}]: placeholders {sorted(found)} "
                    f"!= declared {sorted(declared)}"
                )
    return ResponseTemplate(template_id, variants, declared)


def _variant_list(template_id: str, value) -> tuple[str, ...]:
    if isinstance(value, str):
        value = [value]
    if not isinstance(value, list) or not value or not all(isinstance(v, str) for v in value):
        raise TemplateError(f"template {template_id!r}: variant must be a string or list of strings")
    return tuple(value)


class WatchedTemplates:
    """Reloads a template file when its mtime changes (serves --watch-templates)."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._mtime = self.path.stat().st_mtime_ns
        self.table = load_templates(self.path)

    def changed(self) -> bool:
        mtime = self.path.stat().st_mtime_ns
        if mtime != self._mtime:
            self._mtime = mtime
            self.table = load_templates(self.path)
            return True
        return False
