"""Agent-based dialog routing: layered states, lifetimes, three handler tiers."""

from .handlers import (
    ANY_VALUE,
    AffirmationHandler,
    EmojiSentimentHandler,
    Handler,
    IntentHandler,
    MediaHandler,
    NegationHandler,
    RegexHandler,
)
from .planner import (
    LAYER,
    REPLACE,
    CallbackError,
    ContextUpdates,
    DialogEngine,
    DispatchTrace,
    NoMatchError,
    PlanOutcome,
    TransitionKind,
    TurnResult,
    UnknownSlotError,
    UnknownStateError,
    apply_outcome,
    dispatch,
    dispatch_traced,
    silent_outcome,
    tick_lifetimes,
)
from .rules import RegistrationError, RuleTable, RuleTableBuilder
from ..states import UNBOUNDED, DialogState, StateQueue

__all__ = [
    "ANY_VALUE",
    "AffirmationHandler",
    "CallbackError",
    "ContextUpdates",
    "DialogEngine",
    "DialogState",
    "DispatchTrace",
    "EmojiSentimentHandler",
    "Handler",
    "IntentHandler",
    "LAYER",
    "MediaHandler",
    "NegationHandler",
    "NoMatchError",
    "PlanOutcome",
    "REPLACE",
    "RegexHandler",
    "RegistrationError",
    "RuleTable",
    "RuleTableBuilder",
    "StateQueue",
    "TransitionKind",
    "TurnResult",
    "UNBOUNDED",
    "UnknownSlotError",
    "UnknownStateError",
    "apply_outcome",
    "dispatch",
    "dispatch_traced",
    "silent_outcome",
    "tick_lifetimes",
]
