"""Turn planning: lifetime ticking, three-tier dispatch, outcome application.

Message flow per turn: understand the message, age the state queue (except on
utter non-understanding), let stateless rules fire and merge with the first
matching state or fallback rule, apply the outcome to the user context, and
emit the chat actions (a typing notification always leads).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import TYPE_CHECKING

from ..context import HistoryEntry, UserContext
from ..messages import (
    ChatAction,
    InboundMessage,
    MediaPayload,
    QuickReplyPayload,
    TextPayload,
    VoicePayload,
    send_typing,
)
from ..nlu.catalog import Catalog
from ..nlu.emoji import contains_emoji, emoji_sentiment
from ..nlu.engine import (
    FALLBACK_INTENT,
    MessageUnderstanding,
    Understander,
    catalog_understander,
)
from ..responder import Formality, TemplateTable
from .handlers import Handler
from .rules import RuleTable
from ..states import DialogState, StateQueue

if TYPE_CHECKING:
    from typing import Callable

QUICK_REPLY_INTENT = "quick_reply"
MEDIA_INTENT = "media"


class PlanningError(RuntimeError):
    pass


class NoMatchError(PlanningError):
    """No handler matched; only possible without a catch-all fallback."""


class UnknownStateError(PlanningError):
    """A callback emitted a state the table never declared."""


class UnknownSlotError(PlanningError):
    """A callback wrote a slot outside the registered slot catalog."""


class CallbackError(PlanningError):
    """A rule callback raised; carries the handler name and original error."""

    def __init__(self, handler: Handler, original: Exception):
        super().__init__(f"callback of {handler.name} failed: {original}")
        self.handler = handler
        self.original = original


class TransitionKind(Enum):
    REPLACE = "replace"  # leave the state that owned the firing handler
    LAYER = "layer"  # keep everything, add on top

    def __repr__(self) -> str:  # keep fixture reprs short
        return self.name


REPLACE = TransitionKind.REPLACE
LAYER = TransitionKind.LAYER


@dataclass(frozen=True, slots=True)
class ContextUpdates:
    """Context changes a rule callback may request."""

    slot_writes: dict[str, str] = field(default_factory=dict)
    cleared_slots: tuple[str, ...] = ()
    formality: Formality | None = None
    mood: str | None = None
    user_name: str | None = None

    def is_empty(self) -> bool:
        return not (
            self.slot_writes
            or self.cleared_slots
            or self.formality
            or self.mood
            or self.user_name
        )


@dataclass(frozen=True, slots=True)
class PlanOutcome:
    """What one dispatched turn wants to happen."""

    actions: tuple[ChatAction, ...] = ()
    new_states: tuple[tuple[DialogState, TransitionKind], ...] = ()
    expire_states: tuple[str, ...] = ()
    updates: ContextUpdates = field(default_factory=ContextUpdates)
    silent: bool = False  # explicit opt-in for outcomes with nothing to say

    def __post_init__(self) -> None:
        if (
            not self.actions
            and not self.new_states
            and not self.expire_states
            and self.updates.is_empty()
            and not self.silent
        ):
            raise ValueError("empty outcome must be marked silent")

    @staticmethod
    def merge(parts: list["PlanOutcome"]) -> "PlanOutcome":
        """Stateless outcomes merged ahead of the primary one (last wins on conflicts)."""
        actions: list[ChatAction] = []
        new_states: list[tuple[DialogState, TransitionKind]] = []
        expire: list[str] = []
        slot_writes: dict[str, str] = {}
        cleared: list[str] = []
        formality = mood = user_name = None
        for part in parts:
            actions.extend(part.actions)
            new_states.extend(part.new_states)
            expire.extend(part.expire_states)
            slot_writes.update(part.updates.slot_writes)
            cleared.extend(part.updates.cleared_slots)
            formality = part.updates.formality or formality
            mood = part.updates.mood or mood
            user_name = part.updates.user_name or user_name
        return PlanOutcome(
            actions=tuple(actions),
            new_states=tuple(new_states),
            expire_states=tuple(expire),
            updates=ContextUpdates(
                slot_writes=slot_writes,
                cleared_slots=tuple(cleared),
                formality=formality,
                mood=mood,
                user_name=user_name,
            ),
            silent=all(p.silent for p in parts) if parts else True,
        )


def silent_outcome() -> PlanOutcome:
    return PlanOutcome(silent=True)


@dataclass(frozen=True, slots=True)
class DispatchTrace:
    """Which rules resolved a turn; feeds replay predicates and metrics."""

    intent: str
    confidence: float
    parameters: dict[str, str]
    stateless_fired: tuple[str, ...]
    tier: str  # "state" | "fallback" | "error"
    state_name: str | None
    handler_name: str | None


def tick_lifetimes(queue: StateQueue, understanding: MessageUnderstanding) -> StateQueue:
    """Age every bounded state by one move, except on the fallback intent."""
    if understanding.intent == FALLBACK_INTENT:
        return queue
    return queue.decremented()


def dispatch_traced(
    context: UserContext,
    understanding: MessageUnderstanding,
    table: RuleTable,
) -> tuple[PlanOutcome, DispatchTrace]:
    """Three-tier dispatch.

    Every matching stateless handler fires (they observe, never consume).
    Then active states are scanned in queue order and each state's handlers
    in registration order; the first match becomes the primary outcome.
    Fallbacks are scanned only when no state handler matched.
    """
    parts: list[PlanOutcome] = []
    stateless_fired: list[str] = []
    for handler in table.stateless:
        if handler.matches(understanding):
            parts.append(_run(handler, context, understanding))
            stateless_fired.append(handler.name)

    primary: Handler | None = None
    owner: str | None = None
    for state in context.state_queue:
        for handler in table.handlers_for(state.name):
            if handler.matches(understanding):
                primary, owner = handler, state.name
                break
        if primary:
            break
    tier = "state"
    if primary is None:
        tier = "fallback"
        for handler in table.fallbacks:
            if handler.matches(understanding):
                primary = handler
                break
    if primary is None:
        raise NoMatchError(f"no handler matched intent {understanding.intent!r}")
    parts.append(_run(primary, context, understanding))

    trace = DispatchTrace(
        intent=understanding.intent,
        confidence=understanding.confidence,
        parameters=dict(understanding.parameters),
        stateless_fired=tuple(stateless_fired),
        tier=tier,
        state_name=owner,
        handler_name=primary.name,
    )
    return PlanOutcome.merge(parts), trace


def dispatch(context: UserContext, understanding: MessageUnderstanding, table: RuleTable) -> PlanOutcome:
    outcome, _ = dispatch_traced(context, understanding, table)
    return outcome


def _run(handler: Handler, context: UserContext, understanding: MessageUnderstanding) -> PlanOutcome:
    try:
        return handler.callback(context, understanding)
    except PlanningError:
        raise
    except Exception as exc:
        raise CallbackError(handler, exc) from exc


def apply_outcome(
    context: UserContext,
    outcome: PlanOutcome,
    table: RuleTable,
    owner_state: str | None,
) -> UserContext:
    """Context after the outcome's state transitions and context updates."""
    queue = context.state_queue
    for name in outcome.expire_states:
        queue = queue.remove(name)
    owner_removed = False
    for state, kind in outcome.new_states:
        if state.name not in table.declared_states:
            raise UnknownStateError(f"undeclared state {state.name!r}")
        if kind is REPLACE and owner_state and not owner_removed:
            queue = queue.remove(owner_state)
            owner_removed = True
        queue = queue.add(state)

    updates = outcome.updates
    slots = dict(context.slots)
    for name in updates.cleared_slots:
        _check_slot(name, table)
        slots.pop(name, None)
    for name, value in updates.slot_writes.items():
        _check_slot(name, table)
        slots[name] = value

    return replace(
        context,
        state_queue=queue,
        slots=slots,
        formality=updates.formality or context.formality,
        mood=updates.mood or context.mood,
        user_name=updates.user_name or context.user_name,
    )


def _check_slot(name: str, table: RuleTable) -> None:
    if name not in table.known_slots:
        raise UnknownSlotError(f"slot {name!r} is not registered")


@dataclass(frozen=True, slots=True)
class TurnResult:
    context: UserContext
    actions: tuple[ChatAction, ...]
    trace: DispatchTrace


class DialogEngine:
    """Binds catalog, rule table, and templates into the per-turn pipeline.

    The engine itself is stateless between calls; all conversational state
    travels through the UserContext. Turns for one user must be processed
    serially; distinct users may run in parallel.
    """

    def __init__(
        self,
        catalog: Catalog,
        table: RuleTable,
        templates: TemplateTable | None = None,
        *,
        understander: Understander | None = None,
        transcriber: "Callable[[str], str] | None" = None,
    ):
        self.catalog = catalog
        self.table = table
        self.templates = templates
        self.understander = understander or catalog_understander(catalog)
        self.transcriber = transcriber

    def run_turn(self, context: UserContext, inbound: InboundMessage) -> TurnResult:
        understanding = self.interpret(inbound)

        queue = tick_lifetimes(context.state_queue, understanding)
        mood = context.mood
        if understanding.raw_text and contains_emoji(understanding.raw_text):
            mood = emoji_sentiment(understanding.raw_text)
        ctx = replace(context, state_queue=queue, mood=mood, turn_count=context.turn_count + 1)
        ctx = ctx.with_history(
            HistoryEntry(inbound.timestamp, "user", f"intent={understanding.intent}")
        )

        try:
            outcome, trace = dispatch_traced(ctx, understanding, self.table)
            ctx = apply_outcome(ctx, outcome, self.table, trace.state_name)
            actions = (send_typing(),) + outcome.actions
        except CallbackError:
            # repair the turn: apologize, keep the queue exactly as it was
            ctx = replace(context, turn_count=context.turn_count + 1).with_history(
                HistoryEntry(inbound.timestamp, "user", f"intent={understanding.intent}")
            )
            actions = (send_typing(), self._apology(ctx))
            trace = DispatchTrace(
                intent=understanding.intent,
                confidence=understanding.confidence,
                parameters=dict(understanding.parameters),
                stateless_fired=(),
                tier="error",
                state_name=None,
                handler_name=None,
            )

        summary = "actions=" + ",".join(
            a.metadata.get("template_id", a.kind) for a in actions
        )
        ctx = ctx.with_history(HistoryEntry(inbound.timestamp, "bot", summary))
        return TurnResult(context=ctx, actions=actions, trace=trace)

    def step(self, context: UserContext, inbound: InboundMessage) -> tuple[UserContext, list[ChatAction]]:
        result = self.run_turn(context, inbound)
        return result.context, list(result.actions)

    def interpret(self, inbound: InboundMessage) -> MessageUnderstanding:
        """Unified-format payload to MessageUnderstanding."""
        payload = inbound.payload
        if isinstance(payload, TextPayload):
            return self.understander(payload.text, inbound.timestamp.date())
        if isinstance(payload, QuickReplyPayload):
            return MessageUnderstanding(
                QUICK_REPLY_INTENT, 1.0, {"option_id": payload.option_id}, raw_text=""
            )
        if isinstance(payload, MediaPayload):
            return MessageUnderstanding(MEDIA_INTENT, 1.0, {}, raw_text="", media_kind=payload.media.kind)
        if isinstance(payload, VoicePayload):
            if self.transcriber is not None:
                text = self.transcriber(payload.media.ref)
                return self.understander(text, inbound.timestamp.date())
            return MessageUnderstanding(MEDIA_INTENT, 1.0, {}, raw_text="", media_kind="voice")
        raise PlanningError(f"unknown payload {type(payload).__name__}")

    def _apology(self, ctx: UserContext) -> ChatAction:
        if self.templates is not None and "internal_error" in self.templates:
            return self.templates.say(
                "internal_error", ctx.formality.level, seed=ctx.turn_count
            )
        return ChatAction(
            "send_text",
            text="Sorry, something went wrong on my side. Let's try that again.",
            metadata={"template_id": "internal_error"},
        )
