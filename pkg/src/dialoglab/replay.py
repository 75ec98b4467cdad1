"""Transcript replay: scripted personas driven through the engine for regression.

Each script runs against a fresh in-memory store and claim sink with fixed
timestamps, so a suite is fully deterministic. Expectations come in two
modes: ``exact`` compares the canonical wire form of every action against a
golden transcript (catches any behavior or copy change), while ``predicate``
checks structural facts (intent reached, state active, slot value, template
used) and survives template copy edits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

import yaml

from .claimbot import MemoryClaimSink
from .context import MemoryStore
from .engine.planner import DialogEngine, TurnResult
from .messages import (
    InboundMessage,
    MediaPayload,
    MediaRef,
    Payload,
    QuickReplyPayload,
    TextPayload,
    UserKey,
    action_to_wire,
)

DEFAULT_BASE_TIMESTAMP = datetime(2018, 6, 10, 12, 0, 0, tzinfo=timezone.utc)

MODES = ("exact", "predicate")

PREDICATE_KINDS = (
    "intent",
    "tier",
    "state_active",
    "state_absent",
    "slot",
    "slot_absent",
    "template",
    "action_kinds",
    "claim_submitted",
    "formality",
)


class ScriptError(ValueError):
    """Script file violates the schema; message names the script and turn."""


@dataclass(frozen=True, slots=True)
class ScriptTurn:
    payload: Payload
    expectations: tuple[dict, ...] = ()


@dataclass(frozen=True, slots=True)
class TranscriptScript:
    name: str
    persona: str
    language: str
    turns: tuple[ScriptTurn, ...]
    base_timestamp: datetime = DEFAULT_BASE_TIMESTAMP

    def __post_init__(self) -> None:
        if not self.turns:
            raise ScriptError(f"script {self.name!r}: needs at least one turn")


@dataclass(frozen=True, slots=True)
class ExpectationResult:
    turn: int
    expectation: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True, slots=True)
class ReplayReport:
    script: str
    persona: str
    completed: bool
    turn_count: int
    fallback_turns: int
    results: tuple[ExpectationResult, ...]
    transcript: tuple[tuple[dict, ...], ...]  # wire actions per turn

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.results)

    def to_record(self) -> dict:
        return {
            "script": self.script,
            "persona": self.persona,
            "completed": self.completed,
            "turn_count": self.turn_count,
            "fallback_turns": self.fallback_turns,
            "passed": self.passed,
            "results": [
                {"turn": r.turn, "expectation": r.expectation, "ok": r.ok, "detail": r.detail}
                for r in self.results
            ],
            "transcript": [list(turn) for turn in self.transcript],
        }


@dataclass(frozen=True, slots=True)
class SuiteMetrics:
    completion_rate: float
    mean_turns: float
    mean_fallback_rate: float
    scripts: tuple[tuple[str, bool, bool], ...]  # (name, completed, passed)

    def to_record(self) -> dict:
        return {
            "completion_rate": self.completion_rate,
            "mean_turns": self.mean_turns,
            "mean_fallback_rate": self.mean_fallback_rate,
            "scripts": [
                {"script": name, "completed": completed, "passed": passed}
                for name, completed, passed in self.scripts
            ],
        }

    def format_text(self) -> str:
        lines = [
            f"scripts: {len(self.scripts)}",
            f"completion rate: {self.completion_rate:.3f}",
            f"mean turns: {self.mean_turns:.1f}",
            f"mean fallback rate: {self.mean_fallback_rate:.3f}",
            "",
        ]
        for name, completed, passed in self.scripts:
            status = "PASS" if passed else "FAIL"
            done = "completed" if completed else "incomplete"
            lines.append(f"  {status}  {name} ({done})")
        return "\n".join(lines)


@dataclass
class ReplayEnv:
    """Everything one script ran against; factories create these per script."""

    engine: DialogEngine
    store: MemoryStore = field(default_factory=MemoryStore)
    claims: MemoryClaimSink = field(default_factory=MemoryClaimSink)


def load_script(path: str | Path) -> TranscriptScript:
    path = Path(path)
    raw = yaml.safe_load(path.read_text("utf-8"))
    if not isinstance(raw, dict):
        raise ScriptError(f"script {path}: top level must be a mapping")
    name = raw.get("name") or path.stem
    turns = []
    for i, item in enumerate(raw.get("turns") or []):
        turns.append(_parse_turn(name, i, item))
    base = raw.get("base_timestamp")
    base_ts = (
        datetime.fromisoformat(str(base).replace("Z", "+00:00")).astimezone(timezone.utc)
        if base
        else DEFAULT_BASE_TIMESTAMP
    )
    return TranscriptScript(
        name=name,
        persona=raw.get("persona", ""),
        language=raw.get("language", "en"),
        turns=tuple(turns),
        base_timestamp=base_ts,
    )


def _parse_turn(script: str, index: int, item) -> ScriptTurn:
    if not isinstance(item, dict):
        raise ScriptError(f"script {script!r} turn {index}: must be a mapping")
    payload: Payload
    if "user" in item:
        payload = TextPayload(str(item["user"]))
    elif "quick_reply" in item:
        payload = QuickReplyPayload(str(item["quick_reply"]))
    elif "media" in item:
        media = item["media"]
        payload = MediaPayload(MediaRef(media.get("kind", "image"), media.get("ref", "fixture")))
    else:
        raise ScriptError(f"script {script!r} turn {index}: needs user, quick_reply, or media")
    expectations = []
    for exp in item.get("expect") or []:
        if not isinstance(exp, dict) or len(exp) != 1:
            raise ScriptError(f"script {script!r} turn {index}: expectation must have one key")
        kind = next(iter(exp))
        if kind not in PREDICATE_KINDS:
            raise ScriptError(f"script {script!r} turn {index}: unknown expectation {kind!r}")
        expectations.append(exp)
    return ScriptTurn(payload=payload, expectations=tuple(expectations))


def load_suite(suite_dir: str | Path) -> list[TranscriptScript]:
    paths = sorted(Path(suite_dir).glob("*.yaml"))
    if not paths:
        raise ScriptError(f"no scripts found in {suite_dir}")
    return [load_script(p) for p in paths]


def replay(
    script: TranscriptScript,
    env: ReplayEnv,
    mode: str = "predicate",
    golden: tuple[tuple[dict, ...], ...] | None = None,
) -> ReplayReport:
    """Run one script turn by turn against a fresh environment."""
    if mode not in MODES:
        raise ScriptError(f"unknown replay mode {mode!r}")
    key = UserKey("replay", script.name)
    transcript: list[tuple[dict, ...]] = []
    results: list[ExpectationResult] = []
    fallback_turns = 0

    for i, turn in enumerate(script.turns):
        ctx = env.store.load_or_create(key)
        message = InboundMessage(
            key=key,
            message_id=f"{script.name}-{i}",
            timestamp=script.base_timestamp + timedelta(seconds=60 * i),
            payload=turn.payload,
        )
        result = env.engine.run_turn(ctx, message)
        env.store.save(result.context)
        wire = tuple(action_to_wire(a) for a in result.actions)
        transcript.append(wire)
        if result.trace.tier == "fallback":
            fallback_turns += 1
        for exp in turn.expectations:
            results.append(_check(i, exp, result, env))

    if mode == "exact":
        expected = golden if golden is not None else ()
        ok = tuple(transcript) == tuple(expected)
        detail = "" if ok else _first_divergence(expected, tuple(transcript))
        results.append(ExpectationResult(len(script.turns) - 1, "exact_transcript", ok, detail))

    return ReplayReport(
        script=script.name,
        persona=script.persona,
        completed=len(env.claims.records()) > 0,
        turn_count=len(script.turns),
        fallback_turns=fallback_turns,
        results=tuple(results),
        transcript=tuple(transcript),
    )


def _check(turn: int, exp: dict, result: TurnResult, env: ReplayEnv) -> ExpectationResult:
    kind, value = next(iter(exp.items()))
    label = f"{kind}={value!r}"
    if kind == "intent":
        ok = result.trace.intent == value
        detail = "" if ok else f"intent was {result.trace.intent!r}"
    elif kind == "tier":
        ok = result.trace.tier == value
        detail = "" if ok else f"tier was {result.trace.tier!r}"
    elif kind == "state_active":
        ok = value in result.context.state_queue
        detail = "" if ok else f"states: {result.context.state_queue.names()}"
    elif kind == "state_absent":
        ok = value not in result.context.state_queue
        detail = "" if ok else f"states: {result.context.state_queue.names()}"
    elif kind == "slot":
        name, expected = value["name"], value["value"]
        actual = result.context.slots.get(name)
        ok = actual == expected
        detail = "" if ok else f"slot {name}={actual!r}"
    elif kind == "slot_absent":
        ok = value not in result.context.slots
        detail = "" if ok else f"slot {value} present"
    elif kind == "template":
        used = [a.metadata.get("template_id") for a in result.actions]
        ok = value in used
        detail = "" if ok else f"templates used: {used}"
    elif kind == "action_kinds":
        kinds = [a.kind for a in result.actions]
        ok = kinds == list(value)
        detail = "" if ok else f"kinds: {kinds}"
    elif kind == "claim_submitted":
        ok = (len(env.claims.records()) > 0) == bool(value)
        detail = "" if ok else f"claims: {len(env.claims.records())}"
    elif kind == "formality":
        ok = result.context.formality.level == value
        detail = "" if ok else f"formality is {result.context.formality.level!r}"
    else:  # pragma: no cover - guarded by _parse_turn
        ok, detail = False, f"unknown expectation {kind!r}"
    return ExpectationResult(turn, label, ok, detail)


def _first_divergence(expected, actual) -> str:
    for i, (e, a) in enumerate(zip(expected, actual)):
        if e != a:
            return f"turn {i}: expected {json.dumps(list(e), sort_keys=True)[:120]}... got {json.dumps(list(a), sort_keys=True)[:120]}..."
    return f"turn count differs: expected {len(expected)}, got {len(actual)}"


def run_suite(
    scripts: list[TranscriptScript],
    env_factory,
    mode: str = "predicate",
    golden_dir: str | Path | None = None,
) -> list[ReplayReport]:
    reports = []
    for script in scripts:
        golden = None
        if mode == "exact":
            if golden_dir is None:
                raise ScriptError("exact mode needs a golden transcript directory")
            golden_path = Path(golden_dir) / f"{script.name}.json"
            if not golden_path.exists():
                raise ScriptError(f"missing golden transcript {golden_path}")
            golden = tuple(
                tuple(turn) for turn in json.loads(golden_path.read_text("utf-8"))
            )
        reports.append(replay(script, env_factory(script), mode=mode, golden=golden))
    return reports


def write_golden(report: ReplayReport, golden_dir: str | Path) -> Path:
    golden_dir = Path(golden_dir)
    golden_dir.mkdir(parents=True, exist_ok=True)
    path = golden_dir / f"{report.script}.json"
    payload = [list(turn) for turn in report.transcript]
    path.write_text(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=1), "utf-8")
    return path


def report_metrics(reports: list[ReplayReport]) -> SuiteMetrics:
    """Aggregate statistics over one suite run."""
    if not reports:
        raise ValueError("empty suite")
    completed = sum(1 for r in reports if r.completed)
    mean_turns = sum(r.turn_count for r in reports) / len(reports)
    mean_fallback = sum(r.fallback_turns / r.turn_count for r in reports) / len(reports)
    return SuiteMetrics(
        completion_rate=completed / len(reports),
        mean_turns=mean_turns,
        mean_fallback_rate=mean_fallback,
        scripts=tuple((r.script, r.completed, r.passed) for r in reports),
    )


def render_report_json(reports: list[ReplayReport]) -> str:
    """Deterministic JSON for a full suite run (byte-identical across runs)."""
    payload = {
        "metrics": report_metrics(reports).to_record(),
        "reports": [r.to_record() for r in reports],
    }
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=1)
