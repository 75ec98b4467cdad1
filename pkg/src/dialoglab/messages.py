"""Channel-independent message types and their canonical JSON wire forms.

Every channel adapter normalizes its native input into an ``InboundMessage``
and renders bot output from ``ChatAction`` values; nothing downstream of an
adapter ever sees channel-specific structures. Both directions have a
canonical, byte-stable JSON encoding so transcripts can be diffed and
replayed exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Mapping, Union


class InvalidMessage(ValueError):
    """A message value violates one of its invariants."""

    def __init__(self, field_name: str, reason: str):
        super().__init__(f"{field_name}: {reason}")
        self.field_name = field_name
        self.reason = reason


class DecodeError(ValueError):
    """Bytes could not be decoded into a message; names the offending field."""

    def __init__(self, field_name: str, reason: str):
        super().__init__(f"{field_name}: {reason}")
        self.field_name = field_name
        self.reason = reason


MEDIA_KINDS = ("image", "audio", "other")

ACTION_KINDS = ("send_text", "send_quick_replies", "send_typing", "request_media")


def format_instant(ts: datetime) -> str:
    """UTC ISO-8601 with ``Z`` suffix, seconds resolution."""
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_instant(raw: str) -> datetime:
    try:
        ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError:
        raise DecodeError("timestamp", f"not an ISO-8601 instant: {raw!r}")
    if ts.tzinfo is None:
        raise DecodeError("timestamp", "missing UTC offset")
    return ts.astimezone(timezone.utc)


def utc_now() -> datetime:
    """Current UTC time truncated to whole seconds (the wire resolution)."""
    return datetime.now(timezone.utc).replace(microsecond=0)


@dataclass(frozen=True, slots=True)
class UserKey:
    """Sole key for context lookup: a channel plus a channel-scoped user id."""

    channel_id: str
    user_id: str

    def __post_init__(self) -> None:
        if not self.channel_id:
            raise InvalidMessage("channel_id", "channel_id empty")
        if not self.user_id:
            raise InvalidMessage("user_id", "user_id empty")


@dataclass(frozen=True, slots=True)
class MediaRef:
    """Opaque reference to attached media; content is never inspected."""

    kind: str
    ref: str

    def __post_init__(self) -> None:
        if self.kind not in MEDIA_KINDS:
            raise InvalidMessage("kind", f"unknown media kind {self.kind!r}")
        if not self.ref:
            raise InvalidMessage("ref", "media reference empty")


@dataclass(frozen=True, slots=True)
class TextPayload:
    text: str

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise InvalidMessage("text", "text empty after trimming")


@dataclass(frozen=True, slots=True)
class QuickReplyPayload:
    option_id: str

    def __post_init__(self) -> None:
        if not self.option_id:
            raise InvalidMessage("option_id", "option_id empty")


@dataclass(frozen=True, slots=True)
class MediaPayload:
    media: MediaRef


@dataclass(frozen=True, slots=True)
class VoicePayload:
    """Voice note; transcription happens (if at all) via an engine hook."""

    media: MediaRef


Payload = Union[TextPayload, QuickReplyPayload, MediaPayload, VoicePayload]

_PAYLOAD_TYPES: dict[str, type] = {
    "text": TextPayload,
    "quick_reply": QuickReplyPayload,
    "media": MediaPayload,
    "voice": VoicePayload,
}


@dataclass(frozen=True, slots=True)
class InboundMessage:
    """One user message in the unified format, exactly one payload variant."""

    key: UserKey
    message_id: str
    timestamp: datetime
    payload: Payload

    def __post_init__(self) -> None:
        if not self.message_id:
            raise InvalidMessage("message_id", "message_id empty")
        if self.timestamp.tzinfo is None:
            raise InvalidMessage("timestamp", "timestamp must be timezone-aware")
        if self.timestamp.microsecond != 0:
            raise InvalidMessage("timestamp", "timestamp must have seconds resolution")
        if not isinstance(self.payload, tuple(_PAYLOAD_TYPES.values())):
            raise InvalidMessage("payload", f"unknown payload {type(self.payload).__name__}")


@dataclass(frozen=True)
class ChatAction:
    """One channel-independent bot output."""

    kind: str
    text: str | None = None
    options: tuple[tuple[str, str], ...] = ()
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in ACTION_KINDS:
            raise InvalidMessage("kind", f"unknown action kind {self.kind!r}")
        if self.kind == "send_text" and not self.text:
            raise InvalidMessage("text", "send_text requires text")
        if self.kind == "send_typing" and self.text is not None:
            raise InvalidMessage("text", "send_typing carries no text")
        if self.kind == "send_quick_replies":
            if len(self.options) < 2:
                raise InvalidMessage("options", "send_quick_replies requires >= 2 options")
            ids = [oid for oid, _ in self.options]
            if len(set(ids)) != len(ids):
                raise InvalidMessage("options", "option_ids must be unique")


def send_text(text: str, **metadata: str) -> ChatAction:
    return ChatAction("send_text", text=text, metadata=dict(metadata))


def send_typing() -> ChatAction:
    return ChatAction("send_typing")


def send_quick_replies(prompt: str | None, options: list[tuple[str, str]], **metadata: str) -> ChatAction:
    return ChatAction("send_quick_replies", text=prompt, options=tuple(options), metadata=dict(metadata))


def request_media(prompt: str | None = None, **metadata: str) -> ChatAction:
    return ChatAction("request_media", text=prompt, metadata=dict(metadata))


@dataclass(frozen=True, slots=True)
class TranscriptEntry:
    """One chronological transcript element; bot turns may span several entries."""

    direction: str  # "user" | "bot"
    item: Payload | ChatAction

    def __post_init__(self) -> None:
        if self.direction not in ("user", "bot"):
            raise InvalidMessage("direction", f"unknown direction {self.direction!r}")


Transcript = tuple[TranscriptEntry, ...]


# --- canonical JSON wire forms ------------------------------------------------
#
# Inbound:  {"channel_id","user_id","message_id","timestamp","payload":{"type",...}}
# Outbound: {"action":{"type",...}}  (mirror of the inbound record)
#
# Canonical form: UTF-8, sorted keys, no whitespace, absent fields omitted.


def _canonical(obj: Any) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def payload_to_wire(payload: Payload) -> dict:
    if isinstance(payload, TextPayload):
        return {"type": "text", "text": payload.text}
    if isinstance(payload, QuickReplyPayload):
        return {"type": "quick_reply", "option_id": payload.option_id}
    if isinstance(payload, MediaPayload):
        return {"type": "media", "kind": payload.media.kind, "ref": payload.media.ref}
    if isinstance(payload, VoicePayload):
        return {"type": "voice", "kind": payload.media.kind, "ref": payload.media.ref}
    raise InvalidMessage("payload", f"unknown payload {type(payload).__name__}")


def payload_from_wire(record: Any) -> Payload:
    if not isinstance(record, dict):
        raise DecodeError("payload", "payload must be an object")
    variant_keys = {"text", "option_id", "ref"} & set(record)
    if len(variant_keys) > 1:
        raise DecodeError("payload", "ambiguous payload")
    kind = record.get("type")
    if kind == "text":
        return _guard(TextPayload, text=_require_str(record, "text", scope="payload"))
    if kind == "quick_reply":
        return _guard(QuickReplyPayload, option_id=_require_str(record, "option_id", scope="payload"))
    if kind in ("media", "voice"):
        media = _guard(
            MediaRef,
            kind=_require_str(record, "kind", scope="payload"),
            ref=_require_str(record, "ref", scope="payload"),
        )
        return MediaPayload(media) if kind == "media" else VoicePayload(media)
    raise DecodeError("payload", f"unknown payload type {kind!r}")


def message_to_wire(msg: InboundMessage) -> dict:
    return {
        "channel_id": msg.key.channel_id,
        "user_id": msg.key.user_id,
        "message_id": msg.message_id,
        "timestamp": format_instant(msg.timestamp),
        "payload": payload_to_wire(msg.payload),
    }


def message_from_wire(record: Any) -> InboundMessage:
    if not isinstance(record, dict):
        raise DecodeError("message", "message must be an object")
    key = _guard(
        UserKey,
        channel_id=_require_str(record, "channel_id"),
        user_id=_require_str(record, "user_id"),
    )
    if "payload" not in record:
        raise DecodeError("payload", "missing field")
    return _guard(
        InboundMessage,
        key=key,
        message_id=_require_str(record, "message_id"),
        timestamp=parse_instant(_require_str(record, "timestamp")),
        payload=payload_from_wire(record["payload"]),
    )


def encode_message(msg: InboundMessage) -> bytes:
    """Canonical byte encoding; equal messages always produce identical bytes."""
    return _canonical(message_to_wire(msg))


def decode_message(raw: bytes | str) -> InboundMessage:
    return message_from_wire(_parse_json(raw, "message"))


def action_to_wire(action: ChatAction) -> dict:
    inner: dict[str, Any] = {"type": action.kind}
    if action.text is not None:
        inner["text"] = action.text
    if action.options:
        inner["options"] = [{"id": oid, "label": label} for oid, label in action.options]
    if action.metadata:
        inner["metadata"] = dict(sorted(action.metadata.items()))
    return {"action": inner}


def action_from_wire(record: Any) -> ChatAction:
    if not isinstance(record, dict) or "action" not in record:
        raise DecodeError("action", "missing field")
    inner = record["action"]
    if not isinstance(inner, dict):
        raise DecodeError("action", "action must be an object")
    kind = inner.get("type")
    if kind not in ACTION_KINDS:
        raise DecodeError("action", f"unknown action type {kind!r}")
    options: tuple[tuple[str, str], ...] = ()
    if "options" in inner:
        raw_opts = inner["options"]
        if not isinstance(raw_opts, list):
            raise DecodeError("options", "options must be a list")
        try:
            options = tuple((o["id"], o["label"]) for o in raw_opts)
        except (TypeError, KeyError):
            raise DecodeError("options", "each option needs id and label")
    metadata = inner.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DecodeError("metadata", "metadata must be an object")
    return _guard(ChatAction, kind=kind, text=inner.get("text"), options=options, metadata=metadata)


def encode_action(action: ChatAction) -> bytes:
    return _canonical(action_to_wire(action))


def decode_action(raw: bytes | str) -> ChatAction:
    return action_from_wire(_parse_json(raw, "action"))


def _parse_json(raw: bytes | str, what: str) -> Any:
    try:
        return json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError):
        raise DecodeError(what, "not valid JSON")


def _require_str(record: dict, name: str, scope: str | None = None) -> str:
    where = f"{scope}.{name}" if scope else name
    if name not in record:
        raise DecodeError(where, "missing field")
    value = record[name]
    if not isinstance(value, str):
        raise DecodeError(where, "must be a string")
    return value


def _guard(cls, **kwargs):
    # surface invariant violations as decode errors with the field name kept
    try:
        return cls(**kwargs)
    except InvalidMessage as exc:
        raise DecodeError(exc.field_name, exc.reason) from None
