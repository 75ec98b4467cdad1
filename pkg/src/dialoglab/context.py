"""Per-user conversation context and its persistence.

All conversational state lives here, never in external messaging services:
the state queue, formality, slot frame, mood, and a bounded history of turn
summaries. Stores are pluggable; the file store keeps one JSON record per
user, and saves use optimistic versioning so concurrent turn processing for
the same user is detected instead of silently lost.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field, replace
from datetime import datetime
from pathlib import Path
from typing import Mapping
from urllib.parse import quote, unquote

from .states import DialogState, StateQueue
from .messages import UserKey, format_instant, parse_instant
from .nlu.emoji import NEUTRAL, SENTIMENTS
from .responder import DEFAULT_FORMALITY, Formality

HISTORY_LIMIT = 200


class StoreError(RuntimeError):
    """Underlying storage failed or is unavailable."""


class ContextCorruptError(StoreError):
    """A stored record cannot be decoded; never silently reset."""

    def __init__(self, key: UserKey, reason: str):
        super().__init__(f"corrupt context for {key.channel_id}/{key.user_id}: {reason}")
        self.key = key


class VersionConflict(StoreError):
    """Save raced another writer for the same key (stale snapshot)."""

    def __init__(self, key: UserKey, expected: int, found: int):
        super().__init__(
            f"version conflict for {key.channel_id}/{key.user_id}: "
            f"snapshot {expected}, stored {found}"
        )
        self.key = key


@dataclass(frozen=True, slots=True)
class HistoryEntry:
    timestamp: datetime
    direction: str  # "user" | "bot"
    summary: str  # intent / action ids, never raw text


@dataclass(frozen=True, slots=True)
class UserContext:
    """Everything remembered about one user's conversation."""

    key: UserKey
    state_queue: StateQueue = field(default_factory=StateQueue)
    formality: Formality = DEFAULT_FORMALITY
    user_name: str | None = None
    mood: str = NEUTRAL
    slots: Mapping[str, str] = field(default_factory=dict)
    history: tuple[HistoryEntry, ...] = ()
    version: int = 0
    turn_count: int = 0

    def __post_init__(self) -> None:
        if self.mood not in SENTIMENTS:
            raise ValueError(f"unknown mood {self.mood!r}")

    def with_history(self, entry: HistoryEntry) -> "UserContext":
        history = (self.history + (entry,))[-HISTORY_LIMIT:]
        return replace(self, history=history)

    def last_seen(self) -> datetime | None:
        return self.history[-1].timestamp if self.history else None


def context_to_record(ctx: UserContext) -> dict:
    return {
        "channel_id": ctx.key.channel_id,
        "user_id": ctx.key.user_id,
        "states": [
            {"name": s.name, "lifetime": s.lifetime, "priority": s.priority, "payload": dict(s.payload)}
            for s in ctx.state_queue
        ],
        "formality": {"level": ctx.formality.level, "source": ctx.formality.source},
        "user_name": ctx.user_name,
        "mood": ctx.mood,
        "slots": dict(ctx.slots),
        "history": [
            {"timestamp": format_instant(h.timestamp), "direction": h.direction, "summary": h.summary}
            for h in ctx.history
        ],
        "version": ctx.version,
        "turn_count": ctx.turn_count,
    }


def context_from_record(record: dict, key: UserKey) -> UserContext:
    try:
        queue = StateQueue(
            tuple(
                DialogState(
                    name=s["name"],
                    lifetime=s["lifetime"],
                    priority=s["priority"],
                    payload=dict(s["payload"]),
                )
                for s in record["states"]
            )
        )
        return UserContext(
            key=key,
            state_queue=queue,
            formality=Formality(record["formality"]["level"], record["formality"]["source"]),
            user_name=record["user_name"],
            mood=record["mood"],
            slots=dict(record["slots"]),
            history=tuple(
                HistoryEntry(parse_instant(h["timestamp"]), h["direction"], h["summary"])
                for h in record["history"]
            ),
            version=int(record["version"]),
            turn_count=int(record["turn_count"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ContextCorruptError(key, str(exc))


class ContextStore:
    """Store interface: per-key records with optimistic versioning."""

    def load(self, key: UserKey) -> UserContext | None:
        raise NotImplementedError

    def load_or_create(self, key: UserKey) -> UserContext:
        """Existing context, or a fresh one (formal default, version 0)."""
        return self.load(key) or UserContext(key=key)

    def save(self, ctx: UserContext) -> int:
        """Durable write; returns the new stored version.

        Fails with VersionConflict when the stored version no longer matches
        the snapshot the caller loaded.
        """
        raise NotImplementedError

    def keys(self) -> list[UserKey]:
        raise NotImplementedError


class MemoryStore(ContextStore):
    """In-memory store for tests and replay; serializes records for isolation."""

    def __init__(self):
        self._records: dict[tuple[str, str], str] = {}
        self._lock = threading.Lock()

    def load(self, key: UserKey) -> UserContext | None:
        with self._lock:
            raw = self._records.get((key.channel_id, key.user_id))
        if raw is None:
            return None
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ContextCorruptError(key, str(exc))
        return context_from_record(record, key)

    def save(self, ctx: UserContext) -> int:
        slot = (ctx.key.channel_id, ctx.key.user_id)
        with self._lock:
            raw = self._records.get(slot)
            found = json.loads(raw)["version"] if raw else 0
            if found != ctx.version:
                raise VersionConflict(ctx.key, expected=ctx.version, found=found)
            new_version = ctx.version + 1
            record = context_to_record(replace(ctx, version=new_version))
            self._records[slot] = json.dumps(record, sort_keys=True)
        return new_version

    def keys(self) -> list[UserKey]:
        with self._lock:
            return [UserKey(c, u) for c, u in self._records]


class FileStore(ContextStore):
    """One JSON file per user under a data directory; writes are atomic."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, key: UserKey) -> Path:
        name = f"{quote(key.channel_id, safe='')}__{quote(key.user_id, safe='')}.json"
        return self.data_dir / name

    def load(self, key: UserKey) -> UserContext | None:
        path = self._path(key)
        if not path.exists():
            return None
        try:
            record = json.loads(path.read_text("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ContextCorruptError(key, str(exc))
        except OSError as exc:
            raise StoreError(f"cannot read {path}: {exc}")
        return context_from_record(record, key)

    def save(self, ctx: UserContext) -> int:
        path = self._path(ctx.key)
        with self._lock:
            found = 0
            if path.exists():
                try:
                    found = int(json.loads(path.read_text("utf-8"))["version"])
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise ContextCorruptError(ctx.key, str(exc))
            if found != ctx.version:
                raise VersionConflict(ctx.key, expected=ctx.version, found=found)
            new_version = ctx.version + 1
            record = context_to_record(replace(ctx, version=new_version))
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(record, sort_keys=True, ensure_ascii=False), "utf-8")
            os.replace(tmp, path)
        return new_version

    def keys(self) -> list[UserKey]:
        keys = []
        for path in sorted(self.data_dir.glob("*.json")):
            channel, _, user = path.stem.partition("__")
            if channel and user:
                keys.append(UserKey(unquote(channel), unquote(user)))
        return keys
