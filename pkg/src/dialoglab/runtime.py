"""Assembles catalog, templates, scenario, and engine from a configuration."""

from __future__ import annotations

from dataclasses import dataclass

from .claimbot import ClaimScenario, ClaimSink, ClaimStore, build_scenario, load_jokes, load_phone_catalog
from .claimbot.phones import PhoneCatalog
from .config import AppConfig
from .engine.planner import DialogEngine
from .nlu.catalog import Catalog, load_catalog
from .responder import TemplateTable, load_templates


@dataclass(frozen=True, slots=True)
class Runtime:
    engine: DialogEngine
    scenario: ClaimScenario
    catalog: Catalog
    templates: TemplateTable
    phones: PhoneCatalog
    claims: ClaimSink


def build_runtime(config: AppConfig, claims: ClaimSink | None = None) -> Runtime:
    phones = load_phone_catalog(config.resolved_phones())
    catalog = load_catalog(
        config.resolved_catalog(), extra_entities=(phones.unambiguous_entity("phone_model"),)
    )
    templates = load_templates(config.resolved_templates())
    jokes = load_jokes(config.resolved_jokes())
    claims = claims if claims is not None else ClaimStore(config.claims_dir)
    table, scenario = build_scenario(catalog, templates, phones, jokes, claims, seed=config.seed)
    engine = DialogEngine(scenario.catalog, table, templates)
    return Runtime(
        engine=engine,
        scenario=scenario,
        catalog=scenario.catalog,
        templates=templates,
        phones=phones,
        claims=claims,
    )
