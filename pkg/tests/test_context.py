from __future__ import annotations

import json
import threading
from dataclasses import replace
from datetime import datetime, timezone

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dialoglab.context import (
    HISTORY_LIMIT,
    ContextCorruptError,
    FileStore,
    HistoryEntry,
    MemoryStore,
    UserContext,
    VersionConflict,
    context_from_record,
    context_to_record,
)
from dialoglab.messages import UserKey
from dialoglab.responder import Formality
from dialoglab.states import DialogState, StateQueue

TS = datetime(2018, 6, 10, 12, 0, 0, tzinfo=timezone.utc)
KEY = UserKey("test", "u1")


def sample_context(key=KEY, **overrides) -> UserContext:
    queue = StateQueue().add(DialogState("ASKING_IMEI", None, 0, {"slot": "imei"})).add(
        DialogState("USER_CONFIRMING_ANSWER", 4, 1, {"slot": "imei", "value": "x"})
    )
    base = UserContext(
        key=key,
        state_queue=queue,
        formality=Formality("informal", "detected"),
        user_name="Anna",
        mood="negative",
        slots={"damage_type": "water_damage"},
        history=(HistoryEntry(TS, "user", "intent=greet"),),
        version=0,
        turn_count=3,
    )
    return replace(base, **overrides)


@pytest.fixture(params=["memory", "file"])
def store(request, tmp_path):
    if request.param == "memory":
        return MemoryStore()
    return FileStore(tmp_path / "contexts")


def test_unknown_key_creates_fresh_context(store):
    ctx = store.load_or_create(KEY)
    assert ctx.version == 0
    assert ctx.slots == {}
    assert len(ctx.state_queue) == 0
    assert ctx.formality.level == "formal"


def test_save_then_load_roundtrip(store):
    ctx = sample_context()
    version = store.save(ctx)
    assert version == 1
    loaded = store.load_or_create(KEY)
    assert loaded == replace(ctx, version=1)


def test_second_save_from_stale_snapshot_conflicts(store):
    ctx = sample_context()
    store.save(ctx)
    with pytest.raises(VersionConflict):
        store.save(ctx)  # same snapshot again


def test_version_increases_monotonically(store):
    ctx = sample_context()
    for expected in (1, 2, 3):
        assert store.save(ctx) == expected
        ctx = store.load_or_create(KEY)


def test_corrupt_record_reported_with_key(tmp_path):
    store = FileStore(tmp_path)
    path = store._path(KEY)
    path.write_text("{not json", "utf-8")
    with pytest.raises(ContextCorruptError) as err:
        store.load(KEY)
    assert "u1" in str(err.value)


def test_corrupt_memory_record_reported():
    store = MemoryStore()
    store.save(sample_context())
    slot = (KEY.channel_id, KEY.user_id)
    store._records[slot] = json.dumps({"version": 1})  # schema-incomplete
    with pytest.raises(ContextCorruptError):
        store.load(KEY)


def test_history_is_bounded():
    ctx = UserContext(key=KEY)
    for i in range(HISTORY_LIMIT + 50):
        ctx = ctx.with_history(HistoryEntry(TS, "user", f"intent=i{i}"))
    assert len(ctx.history) == HISTORY_LIMIT
    assert ctx.history[-1].summary == f"intent=i{HISTORY_LIMIT + 49}"
    assert ctx.history[0].summary == "intent=i50"


def test_record_roundtrip_preserves_everything():
    ctx = sample_context(version=7)
    record = context_to_record(ctx)
    assert context_from_record(json.loads(json.dumps(record)), KEY) == ctx


names = st.text(
    alphabet=st.characters(whitelist_categories=("Ll", "Lu", "Nd")), min_size=1, max_size=8
)


@given(
    st.lists(
        st.tuples(names, st.one_of(st.none(), st.integers(1, 9)), st.integers(-2, 2)),
        max_size=5,
    ),
    st.dictionaries(names, names, max_size=4),
)
def test_randomized_context_roundtrip(states, slots):
    queue = StateQueue()
    for name, lifetime, priority in states:
        queue = queue.add(DialogState(name, lifetime, priority))
    ctx = UserContext(key=KEY, state_queue=queue, slots=slots, turn_count=2)
    assert context_from_record(context_to_record(ctx), KEY) == ctx


def test_thousand_users_roundtrip(tmp_path):
    store = FileStore(tmp_path)
    keys = [UserKey("fuzz", f"user-{i}") for i in range(1000)]
    for i, key in enumerate(keys):
        store.save(sample_context(key=key, turn_count=i))
    for i, key in enumerate(keys):
        loaded = store.load_or_create(key)
        assert loaded.turn_count == i
        assert loaded.version == 1


def test_distinct_keys_do_not_interfere_under_threads(store):
    errors = []

    def worker(i: int):
        key = UserKey("par", f"user-{i}")
        try:
            for _ in range(20):
                ctx = store.load_or_create(key)
                store.save(ctx)
            final = store.load_or_create(key)
            assert final.version == 20
        except Exception as exc:  # pragma: no cover
            errors.append((i, exc))

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(16)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert errors == []


def test_file_store_lists_keys(tmp_path):
    store = FileStore(tmp_path)
    store.save(sample_context(key=UserKey("a", "u/1")))
    store.save(sample_context(key=UserKey("b", "u2")))
    assert set(store.keys()) == {UserKey("a", "u/1"), UserKey("b", "u2")}


def test_unknown_mood_rejected():
    with pytest.raises(ValueError):
        UserContext(key=KEY, mood="grumpy")
