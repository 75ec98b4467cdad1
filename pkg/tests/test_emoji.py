from __future__ import annotations

from dialoglab.nlu.emoji import (
    NEGATIVE,
    NEUTRAL,
    POSITIVE,
    contains_emoji,
    emoji_sentiment,
    find_emojis,
    polarity_lexicon,
)


def test_no_emoji_is_neutral():
    assert emoji_sentiment("thanks") == NEUTRAL
    assert not contains_emoji("just words here")


def test_single_emoji_lookup_matches_lexicon():
    lexicon = polarity_lexicon()
    for emoji, polarity in lexicon.items():
        sentiment = emoji_sentiment(f"message {emoji}")
        if polarity > 0:
            assert sentiment == POSITIVE, emoji
        elif polarity < 0:
            assert sentiment == NEGATIVE, emoji
        else:
            assert sentiment == NEUTRAL, emoji


def test_opposite_emojis_cancel():
    assert emoji_sentiment("😀😡") == NEUTRAL
    assert emoji_sentiment("great 😀 but also 😡 hmm") == NEUTRAL


def test_majority_wins():
    assert emoji_sentiment("😀😀😡") == POSITIVE
    assert emoji_sentiment("😡😭🙂") == NEGATIVE


def test_occurrences_count_individually():
    assert find_emojis("😡😡") == ["😡", "😡"]


def test_variation_selector_form_counted_once():
    assert find_emojis("I ❤️ it") == ["❤️"]
    assert emoji_sentiment("I ❤️ it") == POSITIVE


def test_neutral_emojis_do_not_tip():
    assert emoji_sentiment("🤔") == NEUTRAL
    assert emoji_sentiment("🤔😀") == POSITIVE
