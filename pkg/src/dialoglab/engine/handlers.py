"""Dispatch rules: a match predicate over a MessageUnderstanding plus a callback.

Six handler variants cover the rule vocabulary: intent (with optional
parameter constraints), affirmation, negation, regex over the raw text,
media, and emoji sentiment. Callbacks are pure functions of
(context, understanding) producing a PlanOutcome.
"""

from __future__ import annotations

import re
from typing import TYPE_CHECKING, Callable, Final, Mapping

from ..nlu.emoji import NEGATIVE, POSITIVE, emoji_sentiment, contains_emoji
from ..nlu.engine import MessageUnderstanding

if TYPE_CHECKING:  # avoid a runtime cycle with planner/context
    from ..context import UserContext
    from .planner import PlanOutcome

Callback = Callable[["UserContext", MessageUnderstanding], "PlanOutcome"]

ANY_VALUE: Final = "*"  # parameter constraint: present with any value

# Catalogs may split confirmation/denial into finer intents; these sets
# consolidate them for the dedicated handlers.
AFFIRMATIVE_INTENTS = frozenset({"affirm", "agree", "confirm"})
NEGATIVE_INTENTS = frozenset({"negate", "deny", "decline"})


class Handler:
    """Base dispatch rule; subclasses define the match predicate."""

    def __init__(self, callback: Callback, name: str | None = None):
        self.callback = callback
        self.name = name or type(self).__name__

    def matches(self, understanding: MessageUnderstanding) -> bool:
        raise NotImplementedError

    @property
    def key(self) -> tuple:
        """Identity used to reject duplicate registrations."""
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class IntentHandler(Handler):
    """Matches one intent, optionally constraining its parameters.

    ``parameters`` maps entity names to a required value, or to ANY_VALUE to
    require mere presence.
    """

    def __init__(
        self,
        intent: str,
        callback: Callback,
        parameters: Mapping[str, str] | None = None,
        name: str | None = None,
    ):
        super().__init__(callback, name or f"intent:{intent}")
        self.intent = intent
        self.parameters = dict(parameters or {})

    def matches(self, u: MessageUnderstanding) -> bool:
        if u.intent != self.intent:
            return False
        for entity, required in self.parameters.items():
            actual = u.parameters.get(entity)
            if actual is None or (required != ANY_VALUE and actual != required):
                return False
        return True

    @property
    def key(self) -> tuple:
        return ("intent", self.intent, tuple(sorted(self.parameters.items())))


class AffirmationHandler(Handler):
    """Consolidates every intent expressing a yes."""

    def __init__(self, callback: Callback, name: str | None = None):
        super().__init__(callback, name or "affirmation")

    def matches(self, u: MessageUnderstanding) -> bool:
        return u.intent in AFFIRMATIVE_INTENTS

    @property
    def key(self) -> tuple:
        return ("affirmation",)


class NegationHandler(Handler):
    """Consolidates every intent expressing a no."""

    def __init__(self, callback: Callback, name: str | None = None):
        super().__init__(callback, name or "negation")

    def matches(self, u: MessageUnderstanding) -> bool:
        return u.intent in NEGATIVE_INTENTS

    @property
    def key(self) -> tuple:
        return ("negation",)


class RegexHandler(Handler):
    """Matches the raw text; case-insensitive unless flags say otherwise."""

    def __init__(self, pattern: str, callback: Callback, flags: int = re.IGNORECASE, name: str | None = None):
        super().__init__(callback, name or f"regex:{pattern}")
        self.pattern = re.compile(pattern, flags)

    def matches(self, u: MessageUnderstanding) -> bool:
        return bool(self.pattern.search(u.raw_text))

    @property
    def key(self) -> tuple:
        return ("regex", self.pattern.pattern, self.pattern.flags)


class MediaHandler(Handler):
    """Matches media attachments of the given kinds."""

    def __init__(self, kinds: frozenset[str] | set[str], callback: Callback, name: str | None = None):
        super().__init__(callback, name or "media")
        self.kinds = frozenset(kinds)

    def matches(self, u: MessageUnderstanding) -> bool:
        return u.media_kind is not None and u.media_kind in self.kinds

    @property
    def key(self) -> tuple:
        return ("media", tuple(sorted(self.kinds)))


class EmojiSentimentHandler(Handler):
    """Matches messages whose emojis sum to one of the given sentiments."""

    def __init__(
        self,
        callback: Callback,
        sentiments: frozenset[str] | set[str] = frozenset({POSITIVE, NEGATIVE}),
        name: str | None = None,
    ):
        super().__init__(callback, name or "emoji_sentiment")
        self.sentiments = frozenset(sentiments)

    def matches(self, u: MessageUnderstanding) -> bool:
        return contains_emoji(u.raw_text) and emoji_sentiment(u.raw_text) in self.sentiments

    @property
    def key(self) -> tuple:
        return ("emoji_sentiment", tuple(sorted(self.sentiments)))
