"""Device catalog: model aliases, ambiguity resolution, clarification candidates."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import yaml

from ..nlu.catalog import EntitySpec


class PhoneCatalogError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class PhoneModel:
    model_id: str
    name: str
    aliases: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class PhoneCatalog:
    models: tuple[PhoneModel, ...]
    families: dict[str, tuple[str, ...]]  # brand keyword -> member model ids

    def by_id(self, model_id: str) -> PhoneModel | None:
        for model in self.models:
            if model.model_id == model_id:
                return model
        return None

    def lookup(self, text: str) -> tuple[PhoneModel, ...]:
        """Models mentioned in ``text``.

        Exactly one result means an unambiguous mention; several mean a
        clarification menu is needed. Alias matches win over brand-family
        keywords, and a longer alias occurrence suppresses any of its
        substrings ("iphone 8 plus" is not also an "iphone 8").
        """
        matched: list[tuple[PhoneModel, str]] = []
        for model in self.models:
            for alias in (*model.aliases, model.name):
                if _occurs(alias, text):
                    matched.append((model, alias))
                    break
        maximal = [
            (model, alias)
            for model, alias in matched
            if not any(alias != other and alias in other for _, other in matched)
        ]
        if maximal:
            seen: dict[str, PhoneModel] = {}
            for model, _ in maximal:
                seen.setdefault(model.model_id, model)
            return tuple(seen.values())

        for keyword, member_ids in self.families.items():
            if _occurs(keyword, text):
                members = tuple(m for m in self.models if m.model_id in member_ids)
                if members:
                    return members
        return ()

    def unambiguous_entity(self, name: str = "phone_model") -> EntitySpec:
        """Enumerated NLU entity built from aliases that identify one model."""
        values: dict[str, tuple[str, ...]] = {}
        for model in self.models:
            unique = tuple(
                alias
                for alias in (*model.aliases, model.name)
                if len(self.lookup(alias)) == 1
            )
            if unique:
                values[model.model_id] = unique
        return EntitySpec(name=name, kind="enumerated", values=values)

    def alias_pattern(self) -> str:
        """Regex matching any alias, name, or family keyword."""
        words = {a for m in self.models for a in (*m.aliases, m.name)} | set(self.families)
        alternation = "|".join(re.escape(w) for w in sorted(words, key=len, reverse=True))
        return rf"(?<!\w)(?:{alternation})(?!\w)"


def _occurs(needle: str, text: str) -> bool:
    return re.search(rf"(?<!\w){re.escape(needle)}(?!\w)", text, re.IGNORECASE) is not None


def load_phone_catalog(path: str | Path) -> PhoneCatalog:
    raw = yaml.safe_load(Path(path).read_text("utf-8"))
    if not isinstance(raw, dict) or not raw.get("models"):
        raise PhoneCatalogError(f"phone catalog {path}: missing 'models' list")
    models = []
    seen_ids = set()
    for item in raw["models"]:
        model_id = item.get("id")
        if not model_id or model_id in seen_ids:
            raise PhoneCatalogError(f"phone catalog {path}: missing or duplicate model id {model_id!r}")
        seen_ids.add(model_id)
        models.append(
            PhoneModel(model_id=model_id, name=item["name"], aliases=tuple(item.get("aliases") or ()))
        )
    families = {}
    for keyword, members in (raw.get("families") or {}).items():
        unknown = set(members) - seen_ids
        if unknown:
            raise PhoneCatalogError(f"phone catalog {path}: family {keyword!r} references {sorted(unknown)}")
        families[keyword] = tuple(members)
    return PhoneCatalog(models=tuple(models), families=families)
