"""Claim frames and durable claim records.

A frame accumulates the six questionnaire answers; it becomes submittable
only when every field is present and explicitly confirmed (the dialog
guarantees confirmation, the frame re-checks the data invariants). Submitted
records are immutable JSON documents in a claims directory; downstream
claim-management integration is out of scope and replaced by these files.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import date, datetime
from pathlib import Path

import yaml

from ..messages import UserKey, format_instant, parse_instant
from ..nlu.imei import validate_imei

SLOT_ORDER = (
    "damage_type",
    "phone_model",
    "phone_number",
    "imei",
    "damage_date",
    "event_details",
)

DAMAGE_TYPES = ("display_damage", "water_damage", "theft", "other")


class UnsubmittableFrame(ValueError):
    """The dialog tried to submit an incomplete or invalid frame (a bug)."""


@dataclass(frozen=True, slots=True)
class ClaimFrame:
    damage_type: str | None = None
    phone_model: str | None = None
    phone_number: str | None = None
    imei: str | None = None
    damage_date: str | None = None  # ISO day
    event_details: str | None = None

    @classmethod
    def from_slots(cls, slots) -> "ClaimFrame":
        return cls(**{name: slots.get(name) for name in SLOT_ORDER})

    def missing(self) -> tuple[str, ...]:
        return tuple(name for name in SLOT_ORDER if getattr(self, name) is None)

    def problems(self, reference_day: date | None = None) -> list[str]:
        issues = [f"missing field {name}" for name in self.missing()]
        if self.damage_type is not None and self.damage_type not in DAMAGE_TYPES:
            issues.append(f"unknown damage_type {self.damage_type!r}")
        if self.imei is not None and not validate_imei(self.imei):
            issues.append("imei fails the checksum")
        if self.damage_date is not None:
            try:
                day = date.fromisoformat(self.damage_date)
            except ValueError:
                issues.append(f"damage_date not an ISO day: {self.damage_date!r}")
            else:
                if reference_day is not None and day > reference_day:
                    issues.append("damage date in future")
        return issues

    def submittable(self, reference_day: date | None = None) -> bool:
        return not self.problems(reference_day)


@dataclass(frozen=True, slots=True)
class ClaimRecord:
    claim_id: str
    frame: ClaimFrame
    channel_id: str
    user_id: str
    submitted_at: datetime
    transcript_ref: str

    def to_record(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "frame": {name: getattr(self.frame, name) for name in SLOT_ORDER},
            "channel_id": self.channel_id,
            "user_id": self.user_id,
            "submitted_at": format_instant(self.submitted_at),
            "transcript_ref": self.transcript_ref,
        }

    @classmethod
    def from_record(cls, record: dict) -> "ClaimRecord":
        return cls(
            claim_id=record["claim_id"],
            frame=ClaimFrame(**record["frame"]),
            channel_id=record["channel_id"],
            user_id=record["user_id"],
            submitted_at=parse_instant(record["submitted_at"]),
            transcript_ref=record["transcript_ref"],
        )


def _claim_id(submitted_at: datetime, sequence: int) -> str:
    return f"CLM-{submitted_at:%Y%m%d}-{sequence:04d}"


class ClaimSink:
    """Destination for submitted claims."""

    def submit(
        self, frame: ClaimFrame, key: UserKey, transcript_ref: str, submitted_at: datetime
    ) -> ClaimRecord:
        raise NotImplementedError

    def records(self) -> list[ClaimRecord]:
        raise NotImplementedError


class MemoryClaimSink(ClaimSink):
    """Collects claims in memory; used by replay and tests."""

    def __init__(self):
        self._records: list[ClaimRecord] = []
        self._lock = threading.Lock()

    def submit(self, frame, key, transcript_ref, submitted_at) -> ClaimRecord:
        _require_submittable(frame, submitted_at)
        with self._lock:
            record = ClaimRecord(
                claim_id=_claim_id(submitted_at, len(self._records) + 1),
                frame=frame,
                channel_id=key.channel_id,
                user_id=key.user_id,
                submitted_at=submitted_at,
                transcript_ref=transcript_ref,
            )
            self._records.append(record)
        return record

    def records(self) -> list[ClaimRecord]:
        with self._lock:
            return list(self._records)


class ClaimStore(ClaimSink):
    """Append-only claim files under a directory, one JSON document each."""

    def __init__(self, claims_dir: str | Path):
        self.claims_dir = Path(claims_dir)
        self.claims_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def submit(self, frame, key, transcript_ref, submitted_at) -> ClaimRecord:
        _require_submittable(frame, submitted_at)
        with self._lock:
            sequence = len(list(self.claims_dir.glob("claim-*.json"))) + 1
            record = ClaimRecord(
                claim_id=_claim_id(submitted_at, sequence),
                frame=frame,
                channel_id=key.channel_id,
                user_id=key.user_id,
                submitted_at=submitted_at,
                transcript_ref=transcript_ref,
            )
            path = self.claims_dir / f"claim-{record.claim_id}.json"
            path.write_text(
                json.dumps(record.to_record(), sort_keys=True, ensure_ascii=False, indent=2),
                "utf-8",
            )
        return record

    def records(self) -> list[ClaimRecord]:
        records = []
        for path in sorted(self.claims_dir.glob("claim-*.json")):
            records.append(ClaimRecord.from_record(json.loads(path.read_text("utf-8"))))
        return records


def _require_submittable(frame: ClaimFrame, submitted_at: datetime) -> None:
    problems = frame.problems(reference_day=submitted_at.date())
    if problems:
        raise UnsubmittableFrame("; ".join(problems))


def load_jokes(path: str | Path) -> dict[str, tuple[str, ...]]:
    raw = yaml.safe_load(Path(path).read_text("utf-8")) or {}
    return {lang: tuple(items) for lang, items in raw.items()}
