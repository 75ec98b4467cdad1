from __future__ import annotations

import random
from datetime import date

import pytest

from dialoglab.nlu.dates import FutureDateError, extract_date
from oracles import oracle_days_back

REF = date(2018, 6, 10)


def test_yesterday():
    assert extract_date("it broke yesterday", REF) == date(2018, 6, 9)
    assert extract_date("gestern ist es passiert", REF) == date(2018, 6, 9)


def test_today_is_identity():
    for ref in [REF, date(2016, 2, 29), date(1999, 12, 31)]:
        assert extract_date("today", ref) == ref
        assert extract_date("heute", ref) == ref


def test_day_before_yesterday():
    assert extract_date("day before yesterday", REF) == date(2018, 6, 8)
    assert extract_date("vorgestern", REF) == date(2018, 6, 8)


# frozen with the calendar oracle before the implementation existed
FROZEN = [
    (("3 days ago", date(2018, 3, 2)), date(2018, 2, 27)),
    (("1 days ago", date(2016, 3, 1)), date(2016, 2, 29)),  # leap year
    (("3 days ago", date(2016, 3, 1)), date(2016, 2, 27)),
    (("1 days ago", date(2017, 3, 1)), date(2017, 2, 28)),
    (("1 days ago", date(2018, 1, 1)), date(2017, 12, 31)),  # year boundary
    (("1 days ago", date(2000, 3, 1)), date(2000, 2, 29)),  # 400-year rule
    (("1 days ago", date(1900, 3, 1)), date(1900, 2, 28)),  # 100-year rule
]


def test_days_ago_frozen_boundaries():
    for (text, ref), expected in FROZEN:
        assert extract_date(text, ref) == expected


def test_days_ago_matches_oracle_randomized():
    rng = random.Random(42)
    for _ in range(300):
        ref = date(rng.randint(1950, 2050), rng.randint(1, 12), rng.randint(1, 28))
        n = rng.randint(1, 400)
        y, m, d = oracle_days_back(ref.year, ref.month, ref.day, n)
        assert extract_date(f"{n} days ago", ref) == date(y, m, d)
        assert extract_date(f"vor {n} Tagen", ref) == date(y, m, d)


def test_german_vor_tagen():
    assert extract_date("vor 2 Tagen", REF) == date(2018, 6, 8)
    assert extract_date("vor 1 Tag", REF) == date(2018, 6, 9)


def test_explicit_dotted_date():
    assert extract_date("am 12.05.2018 passiert", REF) == date(2018, 5, 12)
    assert extract_date("12.5.18", REF) == date(2018, 5, 12)


def test_explicit_iso_date():
    assert extract_date("on 2018-05-12", REF) == date(2018, 5, 12)


def test_future_dates_rejected():
    with pytest.raises(FutureDateError):
        extract_date("tomorrow", REF)
    with pytest.raises(FutureDateError):
        extract_date("morgen bringe ich es vorbei", REF)
    with pytest.raises(FutureDateError) as err:
        extract_date("11.06.2018", REF)
    assert "damage date in future" in str(err.value)


def test_guten_morgen_is_not_tomorrow():
    assert extract_date("guten Morgen", REF) is None


def test_no_expression_returns_none():
    assert extract_date("my phone broke", REF) is None
    assert extract_date("", REF) is None


def test_impossible_calendar_day_returns_none():
    assert extract_date("31.02.2018", REF) is None
