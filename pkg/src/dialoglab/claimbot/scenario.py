"""The damage-claim intake scenario.

A fixed questionnaire (damage type, device, phone number, IMEI, damage date,
event details) driven by layered dialog states:

* ``CLAIM_FLOW`` marks an open claim and carries captured-but-unconfirmed
  values in its payload.
* One ``ASKING_*`` state per open question captures interpretable answers.
* Every interpreted answer goes through ``USER_CONFIRMING_ANSWER``; a yes
  commits the slot, a no clears it and re-asks.
* Ambiguous device mentions open ``CLARIFYING_PHONE_MODEL`` with a
  quick-reply menu, layered over the question so a typed model still works.
* Small talk, jokes, formality switching, repair, and restart live in the
  stateless and fallback tiers, so interruptions never destroy the flow.

Values mentioned out of order ("my iPhone 8 got wet yesterday") are stashed
as pending and confirmed sequentially when their question comes up.
"""

from __future__ import annotations

import re
from datetime import date, datetime

from ..context import UserContext
from ..engine.handlers import (
    AffirmationHandler,
    EmojiSentimentHandler,
    IntentHandler,
    MediaHandler,
    NegationHandler,
    RegexHandler,
)
from ..engine.planner import (
    LAYER,
    REPLACE,
    ContextUpdates,
    PlanOutcome,
    TransitionKind,
    silent_outcome,
)
from ..engine.rules import RegistrationError, RuleTable, RuleTableBuilder
from ..states import UNBOUNDED, DialogState
from ..messages import ChatAction, send_quick_replies
from ..nlu.catalog import Catalog
from ..nlu.dates import FutureDateError, extract_date
from ..nlu.emoji import NEGATIVE, POSITIVE, emoji_sentiment
from ..nlu.engine import MessageUnderstanding, digit_runs, extract_entity
from ..nlu.imei import validate_imei
from ..responder import TemplateTable, detect_formality
from .claims import SLOT_ORDER, ClaimFrame, ClaimSink
from .phones import PhoneCatalog

FLOW_STATE = "CLAIM_FLOW"
CONFIRM_ANSWER = "USER_CONFIRMING_ANSWER"
CONFIRM_SUBMISSION = "USER_CONFIRMING_SUBMISSION"
CLARIFY_PHONE = "CLARIFYING_PHONE_MODEL"
ASKING = {slot: f"ASKING_{slot.upper()}" for slot in SLOT_ORDER}

ALL_FLOW_STATES = (FLOW_STATE, CONFIRM_ANSWER, CONFIRM_SUBMISSION, CLARIFY_PHONE, *ASKING.values())

CONFIRM_LIFETIME = 6  # dialog moves a pending confirmation survives unanswered

_FORMALITY_TRIGGER = r"\b([Dd]u|[Dd]ich|[Dd]ir|[Dd]ein\w*|Sie|Ihnen)\b"
_MIN_DETAIL_CHARS = 12


class ClaimScenario:
    """Builds the rule table and hosts all rule callbacks."""

    def __init__(
        self,
        catalog: Catalog,
        templates: TemplateTable,
        phones: PhoneCatalog,
        jokes: dict[str, tuple[str, ...]],
        claims: ClaimSink,
        seed: int = 0,
    ):
        self.catalog = catalog.with_entity(phones.unambiguous_entity("phone_model"))
        self.templates = templates
        self.phones = phones
        self.jokes = jokes.get(templates.language) or jokes.get("en") or ("...",)
        self.claims = claims
        self.seed = seed  # base offset for variant rotation

    # every template id any callback renders; validated at build time so a
    # missing template is a registration error, not a runtime apology
    REQUIRED_TEMPLATES = frozenset(
        {
            "greet", "greet_named", "explain", "hint_report", "claim_intro",
            "already_filing", "confirm_answer", "confirm_cleared",
            "clarify_phone_model", "menu_choice_ack", "invalid_phone_number",
            "invalid_imei", "future_damage_date", "unparseable_date",
            "details_too_short", "claim_summary", "confirm_submission",
            "claim_submitted", "claim_discarded", "restart_ack", "repair",
            "repair_empathetic", "joke", "smalltalk_reply", "thanks_reply",
            "goodbye", "ack_affirm", "ack_negate", "name_ack", "formality_ack",
            "media_ack", "mood_positive_ack", "mood_negative_ack",
            "internal_error",
        }
        | {f"ask_{slot}" for slot in SLOT_ORDER}
    )

    # --- table assembly -------------------------------------------------

    def build(self) -> RuleTable:
        missing = sorted(t for t in self.REQUIRED_TEMPLATES if t not in self.templates)
        if missing:
            raise RegistrationError(f"template table is missing {missing}")

        b = RuleTableBuilder()
        b.declare_slots(SLOT_ORDER)
        b.declare_state(FLOW_STATE)

        b.add_stateless(RegexHandler(_FORMALITY_TRIGGER, self.on_formality, flags=0, name="formality_switch"))

        damage_words = self._damage_type_pattern()
        b.add_state_handler(
            ASKING["damage_type"],
            RegexHandler(damage_words, self.capture_damage_type, name="capture_damage_type"),
            targets=(CONFIRM_ANSWER,),
        )
        b.add_state_handler(
            ASKING["phone_model"],
            RegexHandler(self.phones.alias_pattern(), self.capture_phone_model, name="capture_phone_model"),
            targets=(CONFIRM_ANSWER, CLARIFY_PHONE),
        )
        b.add_state_handler(
            CLARIFY_PHONE,
            IntentHandler("quick_reply", self.on_menu_choice, name="phone_menu_choice"),
            targets=tuple(ASKING.values()) + (CONFIRM_SUBMISSION,),
        )
        b.add_state_handler(
            ASKING["phone_number"],
            RegexHandler(r"(?:\d[\s\-/.()]*){5,}", self.capture_phone_number, name="capture_phone_number"),
            targets=(CONFIRM_ANSWER,),
        )
        b.add_state_handler(
            ASKING["imei"],
            RegexHandler(r"(?:\d[\s\-/.()]*){8,}", self.capture_imei, name="capture_imei"),
            targets=(CONFIRM_ANSWER,),
        )
        b.add_state_handler(
            ASKING["damage_date"],
            RegexHandler(self._date_pattern(), self.capture_damage_date, name="capture_damage_date"),
            targets=(CONFIRM_ANSWER,),
        )
        # at the details question, damage vocabulary and non-understanding
        # alike are the answer, not a new claim
        for intent in ("describe_event", "phone_broken", "report_damage", "fallback"):
            b.add_state_handler(
                ASKING["event_details"],
                IntentHandler(intent, self.capture_details, name=f"capture_details:{intent}"),
                targets=(CONFIRM_ANSWER,),
            )
        b.add_state_handler(
            CONFIRM_ANSWER,
            AffirmationHandler(self.on_answer_confirmed, name="answer_confirmed"),
            targets=tuple(ASKING.values()) + (CONFIRM_ANSWER, CONFIRM_SUBMISSION),
        )
        b.add_state_handler(
            CONFIRM_ANSWER,
            NegationHandler(self.on_answer_rejected, name="answer_rejected"),
            targets=tuple(ASKING.values()),
        )
        b.add_state_handler(
            CONFIRM_SUBMISSION,
            AffirmationHandler(self.on_submit, name="submit_claim"),
        )
        b.add_state_handler(
            CONFIRM_SUBMISSION,
            NegationHandler(self.on_discard, name="discard_claim"),
        )

        for intent in ("report_damage", "phone_broken", "describe_event"):
            b.add_fallback(
                IntentHandler(intent, self.start_claim, name=f"start_claim:{intent}"),
                targets=(FLOW_STATE,) + tuple(ASKING.values()) + (CONFIRM_ANSWER,),
            )
        b.add_fallback(IntentHandler("greet", self.on_greet, name="greeting"))
        b.add_fallback(IntentHandler("give_name", self.on_give_name, name="take_name"))
        b.add_fallback(IntentHandler("help_request", self.on_help, name="explain"))
        b.add_fallback(IntentHandler("joke", self.on_joke, name="tell_joke"))
        b.add_fallback(IntentHandler("smalltalk_how_are_you", self.on_smalltalk, name="smalltalk"))
        b.add_fallback(IntentHandler("thanks", self.on_thanks, name="thanks"))
        b.add_fallback(IntentHandler("goodbye", self.on_goodbye, name="goodbye"))
        b.add_fallback(IntentHandler("cancel_restart", self.on_restart, name="restart"))
        b.add_fallback(AffirmationHandler(self.on_stray_affirm, name="stray_affirm"))
        b.add_fallback(NegationHandler(self.on_stray_negate, name="stray_negate"))
        b.add_fallback(EmojiSentimentHandler(self.on_emoji, name="emoji_reaction"))
        b.add_fallback(MediaHandler({"image", "audio", "other", "voice"}, self.on_media, name="media"))
        b.add_fallback(RegexHandler(r".*", self.on_repair, name="repair"))
        return b.build()

    # --- shared helpers -------------------------------------------------

    def _seed(self, ctx: UserContext) -> int:
        return self.seed + ctx.turn_count

    def _say(self, ctx: UserContext, template_id: str, fills: dict | None = None) -> ChatAction:
        return self.templates.say(template_id, ctx.formality.level, fills, seed=self._seed(ctx))

    def _label(self, slot: str, value: str) -> str:
        if slot == "phone_model":
            model = self.phones.by_id(value)
            if model:
                return model.name
        return self.templates.label(value)

    def _field_label(self, slot: str) -> str:
        return self.templates.label(slot)

    def _now(self, ctx: UserContext) -> datetime:
        ts = ctx.last_seen()
        if ts is None:
            raise RuntimeError("turn history is empty; engine must append the user entry first")
        return ts

    @staticmethod
    def _pending(ctx: UserContext) -> dict[str, str]:
        flow = ctx.state_queue.get(FLOW_STATE)
        return dict(flow.payload) if flow else {}

    @staticmethod
    def _flow(pending: dict[str, str]) -> tuple[DialogState, TransitionKind]:
        return DialogState(FLOW_STATE, UNBOUNDED, priority=-1, payload=dict(pending)), LAYER

    def _stash(self, ctx: UserContext, u: MessageUnderstanding, pending: dict[str, str]) -> dict[str, str]:
        """Remember every claim value the message happens to mention."""
        merged = dict(pending)
        for slot in SLOT_ORDER:
            value = u.parameters.get(slot)
            if value is not None and slot not in ctx.slots and slot not in merged:
                merged[slot] = value
        return merged

    def _next_step(
        self, ctx: UserContext, slots: dict[str, str], pending: dict[str, str]
    ) -> tuple[list[ChatAction], list[tuple[DialogState, TransitionKind]]]:
        """Question (or confirmation, or final summary) for the first open slot."""
        for slot in SLOT_ORDER:
            if slot in slots:
                continue
            if slot in pending:
                return self._confirmation_step(ctx, slot, pending[slot])
            state = DialogState(ASKING[slot], UNBOUNDED, payload={"slot": slot})
            return [self._say(ctx, f"ask_{slot}")], [(state, LAYER)]
        summary = self._summary_text(slots)
        state = DialogState(CONFIRM_SUBMISSION, CONFIRM_LIFETIME, priority=1)
        actions = [
            self._say(ctx, "claim_summary", {"summary": summary}),
            self._say(ctx, "confirm_submission"),
        ]
        return actions, [(state, LAYER)]

    def _confirmation_step(
        self, ctx: UserContext, slot: str, value: str
    ) -> tuple[list[ChatAction], list[tuple[DialogState, TransitionKind]]]:
        action = self._say(
            ctx,
            "confirm_answer",
            {"field": self._field_label(slot), "value": self._label(slot, value)},
        )
        state = DialogState(
            CONFIRM_ANSWER, CONFIRM_LIFETIME, priority=1, payload={"slot": slot, "value": value}
        )
        return [action], [(state, LAYER)]

    def _summary_text(self, slots: dict[str, str]) -> str:
        lines = [
            f"- {self._field_label(slot)}: {self._label(slot, slots[slot])}"
            for slot in SLOT_ORDER
            if slot in slots
        ]
        return "\n".join(lines)

    def _reask(
        self, ctx: UserContext, pending: dict[str, str]
    ) -> tuple[list[ChatAction], list[tuple[DialogState, TransitionKind]]]:
        """Re-render the most salient open question (used by repair and re-entry).

        When the flow is open but its question state has expired (e.g. after a
        long small-talk detour), the state is layered again so the next answer
        is captured instead of falling through.
        """
        for state in ctx.state_queue:
            if state.name == CONFIRM_ANSWER:
                slot, value = state.payload["slot"], state.payload["value"]
                return self._confirmation_step(ctx, slot, value)[0], []
            if state.name == CONFIRM_SUBMISSION:
                actions = [
                    self._say(ctx, "claim_summary", {"summary": self._summary_text(dict(ctx.slots))}),
                    self._say(ctx, "confirm_submission"),
                ]
                return actions, []
            if state.name == CLARIFY_PHONE:
                return [self._clarify_menu(ctx, state.payload.get("candidates", ""))], []
            if state.name in ASKING.values():
                return [self._say(ctx, f"ask_{state.payload['slot']}")], []
        if FLOW_STATE in ctx.state_queue:
            return self._next_step(ctx, dict(ctx.slots), pending)
        return [], []

    def _clarify_menu(self, ctx: UserContext, candidates_csv: str) -> ChatAction:
        options = []
        for model_id in candidates_csv.split(","):
            model = self.phones.by_id(model_id.strip())
            if model:
                options.append((model.model_id, model.name))
        prompt = self.templates.render("clarify_phone_model", ctx.formality.level, seed=self._seed(ctx))
        return send_quick_replies(prompt, options, template_id="clarify_phone_model")

    def _to_confirmation(
        self,
        ctx: UserContext,
        u: MessageUnderstanding,
        slot: str,
        value: str,
        extra_expired: tuple[str, ...] = (),
    ) -> PlanOutcome:
        pending = self._stash(ctx, u, self._pending(ctx))
        pending[slot] = value
        actions, states = self._confirmation_step(ctx, slot, value)
        # the confirmation replaces the question state that captured the answer
        states = [(states[0][0], REPLACE), self._flow(pending)]
        return PlanOutcome(actions=tuple(actions), new_states=tuple(states), expire_states=extra_expired)

    def _stay_and_say(self, ctx: UserContext, u: MessageUnderstanding, template_id: str) -> PlanOutcome:
        """Keep the question open, update the stash, emit one correction prompt."""
        pending = self._stash(ctx, u, self._pending(ctx))
        return PlanOutcome(actions=(self._say(ctx, template_id),), new_states=(self._flow(pending),))

    # --- stateless rules ------------------------------------------------

    def on_formality(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        detected = detect_formality(u.raw_text)
        if detected is None or detected.level == ctx.formality.level:
            return silent_outcome()
        ack = self.templates.say("formality_ack", detected.level, seed=self._seed(ctx))
        return PlanOutcome(actions=(ack,), updates=ContextUpdates(formality=detected))

    # --- questionnaire rules ----------------------------------------------

    def start_claim(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        pending = self._stash(ctx, u, self._pending(ctx))
        if FLOW_STATE in ctx.state_queue:
            reask_actions, reask_states = self._reask(ctx, pending)
            actions = [self._say(ctx, "already_filing"), *reask_actions]
            return PlanOutcome(
                actions=tuple(actions), new_states=(self._flow(pending), *reask_states)
            )
        next_actions, next_states = self._next_step(ctx, dict(ctx.slots), pending)
        actions = [self._say(ctx, "claim_intro"), *next_actions]
        return PlanOutcome(
            actions=tuple(actions),
            new_states=(self._flow(pending), *next_states),
        )

    def capture_damage_type(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        value = u.parameters.get("damage_type") or self._scan_damage_type(u.raw_text)
        if value is None:
            return self._stay_and_say(ctx, u, "ask_damage_type")
        return self._to_confirmation(ctx, u, "damage_type", value)

    def capture_phone_model(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        matches = self.phones.lookup(u.raw_text)
        if len(matches) == 1:
            return self._to_confirmation(
                ctx, u, "phone_model", matches[0].model_id, extra_expired=(CLARIFY_PHONE,)
            )
        if len(matches) > 1:
            csv = ",".join(m.model_id for m in matches)
            state = DialogState(
                CLARIFY_PHONE, CONFIRM_LIFETIME, priority=1, payload={"candidates": csv}
            )
            pending = self._stash(ctx, u, self._pending(ctx))
            return PlanOutcome(
                actions=(self._clarify_menu(ctx, csv),),
                new_states=((state, LAYER), self._flow(pending)),
            )
        return self._stay_and_say(ctx, u, "ask_phone_model")

    def on_menu_choice(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        state = ctx.state_queue.get(CLARIFY_PHONE)
        candidates = (state.payload.get("candidates", "") if state else "").split(",")
        option = u.parameters.get("option_id", "")
        model = self.phones.by_id(option)
        if model is None or option not in candidates:
            return PlanOutcome(actions=(self._clarify_menu(ctx, ",".join(candidates)),))
        # a menu pick is an explicit choice, not an interpretation: commit directly
        pending = self._pending(ctx)
        pending.pop("phone_model", None)
        slots = dict(ctx.slots)
        slots["phone_model"] = model.model_id
        next_actions, next_states = self._next_step(ctx, slots, pending)
        states = [(next_states[0][0], REPLACE), *next_states[1:], self._flow(pending)]
        return PlanOutcome(
            actions=(self._say(ctx, "menu_choice_ack", {"value": model.name}), *next_actions),
            new_states=tuple(states),
            expire_states=(ASKING["phone_model"],),
            updates=ContextUpdates(slot_writes={"phone_model": model.model_id}),
        )

    def capture_phone_number(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        for run in digit_runs(u.raw_text):
            if 6 <= len(run) <= 14:
                return self._to_confirmation(ctx, u, "phone_number", run)
        return self._stay_and_say(ctx, u, "invalid_phone_number")

    def capture_imei(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        runs = digit_runs(u.raw_text)
        for run in runs:
            if len(run) == 15 and validate_imei(run):
                return self._to_confirmation(ctx, u, "imei", run)
        return self._stay_and_say(ctx, u, "invalid_imei")

    def capture_damage_date(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        try:
            day = extract_date(u.raw_text, self._now(ctx).date())
        except FutureDateError:
            return self._stay_and_say(ctx, u, "future_damage_date")
        if day is None:
            return self._stay_and_say(ctx, u, "unparseable_date")
        return self._to_confirmation(ctx, u, "damage_date", day.isoformat())

    def capture_details(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        text = u.raw_text.strip()
        if len(text) < _MIN_DETAIL_CHARS:
            return self._stay_and_say(ctx, u, "details_too_short")
        return self._to_confirmation(ctx, u, "event_details", text)

    def on_answer_confirmed(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        state = ctx.state_queue.get(CONFIRM_ANSWER)
        if state is None:
            return PlanOutcome(actions=(self._say(ctx, "ack_affirm"),))
        slot, value = state.payload["slot"], state.payload["value"]
        pending = self._pending(ctx)
        pending.pop(slot, None)
        slots = dict(ctx.slots)
        slots[slot] = value
        next_actions, next_states = self._next_step(ctx, slots, pending)
        states = [(next_states[0][0], REPLACE), *next_states[1:], self._flow(pending)]
        return PlanOutcome(
            actions=tuple(next_actions),
            new_states=tuple(states),
            updates=ContextUpdates(slot_writes={slot: value}),
        )

    def on_answer_rejected(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        state = ctx.state_queue.get(CONFIRM_ANSWER)
        if state is None:
            return PlanOutcome(actions=(self._say(ctx, "ack_negate"),))
        slot = state.payload["slot"]
        pending = self._pending(ctx)
        pending.pop(slot, None)
        asking = DialogState(ASKING[slot], UNBOUNDED, payload={"slot": slot})
        return PlanOutcome(
            actions=(self._say(ctx, "confirm_cleared"), self._say(ctx, f"ask_{slot}")),
            new_states=((asking, REPLACE), self._flow(pending)),
            updates=ContextUpdates(cleared_slots=(slot,)),
        )

    def on_submit(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        frame = ClaimFrame.from_slots(ctx.slots)
        now = self._now(ctx)
        ref = f"{ctx.key.channel_id}/{ctx.key.user_id}#turn{ctx.turn_count}"
        record = self.claims.submit(frame, ctx.key, transcript_ref=ref, submitted_at=now)
        return PlanOutcome(
            actions=(self._say(ctx, "claim_submitted", {"claim_id": record.claim_id}),),
            expire_states=ALL_FLOW_STATES,
            updates=ContextUpdates(cleared_slots=SLOT_ORDER),
        )

    def on_discard(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        return PlanOutcome(
            actions=(self._say(ctx, "claim_discarded"),),
            expire_states=ALL_FLOW_STATES,
            updates=ContextUpdates(cleared_slots=SLOT_ORDER),
        )

    # --- fallback tier ----------------------------------------------------

    def on_greet(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        if ctx.user_name:
            greeting = self._say(ctx, "greet_named", {"name": ctx.user_name})
        else:
            greeting = self._say(ctx, "greet")
        reask_actions, reask_states = self._reask(ctx, self._pending(ctx))
        return PlanOutcome(actions=(greeting, *reask_actions), new_states=tuple(reask_states))

    def on_give_name(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        name = u.parameters.get("user_name")
        if not name:
            return self.on_repair(ctx, u)
        reask_actions, reask_states = self._reask(ctx, self._pending(ctx))
        return PlanOutcome(
            actions=(self._say(ctx, "name_ack", {"name": name}), *reask_actions),
            new_states=tuple(reask_states),
            updates=ContextUpdates(user_name=name),
        )

    def on_help(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        reask_actions, reask_states = self._reask(ctx, self._pending(ctx))
        return PlanOutcome(
            actions=(self._say(ctx, "explain"), *reask_actions), new_states=tuple(reask_states)
        )

    def on_joke(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        joke = self.jokes[self._seed(ctx) % len(self.jokes)]
        return PlanOutcome(actions=(self._say(ctx, "joke", {"joke": joke}),))

    def on_smalltalk(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        return PlanOutcome(actions=(self._say(ctx, "smalltalk_reply"),))

    def on_thanks(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        return PlanOutcome(actions=(self._say(ctx, "thanks_reply"),))

    def on_goodbye(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        return PlanOutcome(actions=(self._say(ctx, "goodbye"),))

    def on_restart(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        return PlanOutcome(
            actions=(self._say(ctx, "restart_ack"),),
            expire_states=ALL_FLOW_STATES,
            updates=ContextUpdates(cleared_slots=SLOT_ORDER),
        )

    def on_stray_affirm(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        return PlanOutcome(actions=(self._say(ctx, "ack_affirm"),))

    def on_stray_negate(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        return PlanOutcome(actions=(self._say(ctx, "ack_negate"),))

    def on_emoji(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        sentiment = emoji_sentiment(u.raw_text)
        template = "mood_positive_ack" if sentiment == POSITIVE else "mood_negative_ack"
        reask_actions, reask_states = self._reask(ctx, self._pending(ctx))
        return PlanOutcome(
            actions=(self._say(ctx, template), *reask_actions), new_states=tuple(reask_states)
        )

    def on_media(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        reask_actions, reask_states = self._reask(ctx, self._pending(ctx))
        return PlanOutcome(
            actions=(self._say(ctx, "media_ack"), *reask_actions), new_states=tuple(reask_states)
        )

    def on_repair(self, ctx: UserContext, u: MessageUnderstanding) -> PlanOutcome:
        template = "repair_empathetic" if ctx.mood == NEGATIVE else "repair"
        actions = [self._say(ctx, template)]
        reask_actions, reask_states = self._reask(ctx, self._pending(ctx))
        actions += reask_actions if reask_actions else [self._say(ctx, "hint_report")]
        return PlanOutcome(actions=tuple(actions), new_states=tuple(reask_states))

    # --- small scanners ---------------------------------------------------

    def _scan_damage_type(self, text: str) -> str | None:
        spec = self.catalog.entities.get("damage_type")
        if spec is None:
            return None
        return extract_entity(spec, text, date.today())

    def _damage_type_pattern(self) -> str:
        spec = self.catalog.entities["damage_type"]
        words = [syn for synonyms in spec.values.values() for syn in synonyms]
        alternation = "|".join(re.escape(w) for w in sorted(words, key=len, reverse=True))
        return rf"(?<!\w)(?:{alternation})(?!\w)"

    def _date_pattern(self) -> str:
        return (
            r"\b(today|yesterday|tomorrow|heute|gestern|vorgestern|morgen)\b"
            r"|\d{1,2}\.\d{1,2}\.\d{2,4}"
            r"|\d{4}-\d{2}-\d{2}"
            r"|\b\d{1,3}\s+days?\s+ago\b"
            r"|\bvor\s+\d{1,3}\s+tag(en|e)?\b"
        )


def build_scenario(
    catalog: Catalog,
    templates: TemplateTable,
    phones: PhoneCatalog,
    jokes: dict[str, tuple[str, ...]],
    claims: ClaimSink,
    seed: int = 0,
) -> tuple[RuleTable, ClaimScenario]:
    """Validated rule table for the claim questionnaire plus its scenario object."""
    scenario = ClaimScenario(catalog, templates, phones, jokes, claims, seed=seed)
    return scenario.build(), scenario
