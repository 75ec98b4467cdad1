from __future__ import annotations

import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))  # tests/oracles.py

from dialoglab.claimbot import MemoryClaimSink
from dialoglab.config import AppConfig, resolve_config
from dialoglab.context import MemoryStore
from dialoglab.messages import InboundMessage, QuickReplyPayload, TextPayload, UserKey
from dialoglab.replay import ReplayEnv
from dialoglab.runtime import Runtime, build_runtime

BASE_TS = datetime(2018, 6, 10, 12, 0, 0, tzinfo=timezone.utc)

REPO_ROOT = Path(__file__).resolve().parent.parent
PERSONA_DIR = REPO_ROOT / "fixtures" / "personas"
GOLDEN_DIR = REPO_ROOT / "fixtures" / "golden"
SCHEMA_PATH = REPO_ROOT / "schema" / "chat_api.schema.json"


def make_config(language: str = "en", **overrides) -> AppConfig:
    values = {"language": language}
    values.update(overrides)
    return resolve_config(values)


@pytest.fixture(scope="session")
def config_en() -> AppConfig:
    return make_config("en")


@pytest.fixture(scope="session")
def config_de() -> AppConfig:
    return make_config("de")


def fresh_runtime(language: str = "en", **overrides) -> tuple[Runtime, MemoryClaimSink]:
    sink = MemoryClaimSink()
    runtime = build_runtime(make_config(language, **overrides), claims=sink)
    return runtime, sink


@pytest.fixture()
def runtime_en() -> Runtime:
    return fresh_runtime("en")[0]


@pytest.fixture()
def runtime_de() -> Runtime:
    return fresh_runtime("de")[0]


def env_factory(script) -> ReplayEnv:
    runtime, sink = fresh_runtime(script.language)
    return ReplayEnv(engine=runtime.engine, claims=sink)


class Conversation:
    """Drives one user through an engine with deterministic timestamps."""

    def __init__(self, engine, key: UserKey | None = None, base_ts: datetime = BASE_TS):
        self.engine = engine
        self.store = MemoryStore()
        self.key = key or UserKey("test", "u1")
        self.base_ts = base_ts
        self.turn = 0
        self.results = []

    def _send(self, payload):
        ctx = self.store.load_or_create(self.key)
        message = InboundMessage(
            self.key,
            f"m{self.turn}",
            self.base_ts + timedelta(seconds=60 * self.turn),
            payload,
        )
        self.turn += 1
        result = self.engine.run_turn(ctx, message)
        self.store.save(result.context)
        self.results.append(result)
        return result

    def say(self, text: str):
        return self._send(TextPayload(text))

    def pick(self, option_id: str):
        return self._send(QuickReplyPayload(option_id))

    @property
    def context(self):
        return self.store.load_or_create(self.key)


def templates_used(result) -> list[str]:
    return [a.metadata.get("template_id") for a in result.actions if a.metadata.get("template_id")]
