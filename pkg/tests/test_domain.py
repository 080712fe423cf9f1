import json

import pytest
from hypothesis import given, strategies as st

from itnkit.domain import (
    LOCALE_DIR, AugmentationConfig, Cardinal, Date, Decimal, DigitSequence, EntityClass, EntitySpan,
    Fraction, LocaleError, Measure, Money, Ordinal, SpokenWrittenPair, Alignment, Telephone, Time,
    load_locale, value_from_json, value_to_json,
)


def test_fr_profile_uses_comma_decimal():
    fr = load_locale(LOCALE_DIR / "fr.json")
    assert fr.decimal_separator == ","
    assert fr.prefers_24h


def test_en_profile_is_reference_locale():
    en = load_locale(LOCALE_DIR / "en.json")
    assert en.decimal_separator == "."
    assert en.clock == "prefers-12h"


def test_group_separator_equal_to_decimal_is_rejected(tmp_path):
    data = json.loads((LOCALE_DIR / "en.json").read_text(encoding="utf-8"))
    data["group_separators"] = ["."]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(LocaleError):
        load_locale(path)


def test_malformed_json_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"language": "xx",\n  oops}', encoding="utf-8")
    with pytest.raises(LocaleError, match="line 2"):
        load_locale(path)


def test_loading_twice_gives_equal_profiles():
    a = load_locale(LOCALE_DIR / "de.json")
    b = load_locale(LOCALE_DIR / "de.json")
    assert a == b and hash(a) == hash(b)


@pytest.mark.parametrize("tag", ["en", "fr", "de", "es", "it"])
def test_bundled_lexicons_non_empty(tag):
    profile = load_locale(LOCALE_DIR / f"{tag}.json")
    assert profile.number_words and profile.magnitude_lexicon and profile.months
    assert profile.decimal_separator not in profile.group_separators


def test_value_invariants():
    with pytest.raises(ValueError):
        Time(13, 0, None, "pm")
    with pytest.raises(ValueError):
        Fraction(1, 0)
    with pytest.raises(ValueError):
        Date(None, None, None)
    assert Time(6, 15, None, "am").to_24h() == (6, 15)
    assert Time(12, 5, None, "am").to_24h() == (0, 5)


digits = st.text("0123456789", min_size=1, max_size=8)
values = st.one_of(
    st.builds(Cardinal, st.integers(-10**9, 10**9)),
    st.builds(Ordinal, st.integers(1, 10**6)),
    st.builds(Decimal, st.integers(0, 10**6), digits, st.booleans()),
    st.builds(Fraction, st.integers(0, 99), st.integers(1, 99), st.none() | st.integers(1, 9)),
    st.builds(Money, st.integers(0, 10**6), st.none() | st.text("0123456789", min_size=2, max_size=2),
              st.sampled_from(["USD", "EUR"])),
    st.builds(Time, st.integers(1, 12), st.integers(0, 59), st.none() | st.integers(0, 59),
              st.sampled_from(["am", "pm"])),
    st.builds(Date, st.integers(1, 28), st.integers(1, 12), st.integers(1900, 2100)),
    st.builds(Measure, st.builds(Cardinal, st.integers(0, 1000)), st.sampled_from(["gram", "pound"])),
    st.builds(Telephone, st.lists(digits, min_size=2, max_size=4).map(tuple)),
    st.builds(DigitSequence, digits),
)


@given(values)
def test_value_json_round_trip(value):
    encoded = json.loads(json.dumps(value_to_json(value)))
    assert value_from_json(encoded) == value


def test_pair_json_round_trip():
    span = EntitySpan(EntityClass.TIME, 14, 21, "6:15 am", Time(6, 15, None, "am"))
    pair = SpokenWrittenPair(("arrive", "before", "six", "fifteen", "a", "m"), "Arrive before 6:15 am.",
                             "en", (Alignment(2, 6, span),), id="7")
    assert SpokenWrittenPair.from_json(json.loads(json.dumps(pair.to_json()))) == pair


def test_pair_rejects_bad_alignment():
    span = EntitySpan(EntityClass.CARDINAL, 0, 1, "9", Cardinal(9))
    with pytest.raises(ValueError):
        SpokenWrittenPair(("nine",), "9", "en", (Alignment(0, 2, span),))


def test_augmentation_config_validates(en):
    with pytest.raises(ValueError):
        AugmentationConfig(en, max_variants_per_entity=0)
    assert AugmentationConfig(en, seed=-1).seed == 2**64 - 1
