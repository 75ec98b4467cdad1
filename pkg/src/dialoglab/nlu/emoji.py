"""Emoji-based message sentiment from a shipped polarity lexicon."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

POSITIVE = "positive"
NEUTRAL = "neutral"
NEGATIVE = "negative"

SENTIMENTS = (POSITIVE, NEUTRAL, NEGATIVE)


@lru_cache(maxsize=1)
def polarity_lexicon() -> dict[str, int]:
    """Lexicon mapping emoji to polarity in {-1, 0, +1} (versioned data file)."""
    raw = resources.files("dialoglab").joinpath("data/emoji_polarity.json").read_text("utf-8")
    lexicon = json.loads(raw)["polarity"]
    return {emoji: int(score) for emoji, score in lexicon.items()}


@lru_cache(maxsize=1)
def _longest_first() -> tuple[str, ...]:
    # longest-first so variation-selector forms beat their base character
    return tuple(sorted(polarity_lexicon(), key=len, reverse=True))


def find_emojis(text: str) -> list[str]:
    """Lexicon emojis in order of occurrence, one entry per occurrence."""
    hits: list[str] = []
    i = 0
    while i < len(text):
        for emoji in _longest_first():
            if text.startswith(emoji, i):
                hits.append(emoji)
                i += len(emoji)
                break
        else:
            i += 1
    return hits


def contains_emoji(text: str) -> bool:
    return bool(find_emojis(text))


def emoji_sentiment(text: str) -> str:
    """Sign of the summed polarities; neutral when no emoji or balanced."""
    total = sum(polarity_lexicon()[e] for e in find_emojis(text))
    if total > 0:
        return POSITIVE
    if total < 0:
        return NEGATIVE
    return NEUTRAL
