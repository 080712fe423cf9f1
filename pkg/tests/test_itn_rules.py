import dataclasses
import random

import pytest
from hypothesis import given, settings, strategies as st

from itnkit.domain import Cardinal, Decimal, EntityClass, Money, Ordinal, Time
from itnkit.generator import all_variants
from itnkit.itn_rules import itn, parse_spoken, render_written
from itnkit.segmenter import canonicalize, segment
from synthetic import CLASSES, random_value


def parsed(text, locale):
    return [e.value for e in parse_spoken(text.split(), locale)]


def test_parse_examples(en):
    assert parsed("nine out of ten statistics", en) == [Cardinal(9), Cardinal(10)]
    assert parsed("sixtieth", en) == [Ordinal(60)]
    assert parsed("six p m", en) == [Time(6, 0, None, "pm")]
    assert parsed("quarter past six a m", en) == [Time(6, 15, None, "am")]


def test_twenty_twenty_defaults_to_cardinal(en):
    assert parsed("twenty twenty", en) == [Cardinal(2020)]


def test_lone_oh_is_not_a_number(en):
    assert parsed("oh my", en) == []


def test_render_examples(en, fr, de):
    assert render_written(Decimal(25000, "00"), de) == "25.000,00"
    assert render_written(Time(1, 30, None, "pm"), fr) == "13h30"
    assert render_written(Cardinal(2), en) == "two"
    assert render_written(Cardinal(0), en) == "0"
    assert render_written(Money(1, "20", "EUR"), fr) == "1,20 €"


def test_itn_examples(en):
    assert itn("I found out that nine out of ten statistics are wrong.", en) == \
        "I found out that 9 out of 10 statistics are wrong."
    assert itn("hello world", en) == "hello world"
    assert itn("Dad's surprise sixtieth is tonight, arrive before six p m.", en) == \
        "Dad's surprise 60th is tonight, arrive before 6 pm."


def compatible(got, want):
    if type(got) is not type(want):
        return False
    return all(getattr(got, f.name) is None or getattr(got, f.name) == getattr(want, f.name)
               for f in dataclasses.fields(want))


def test_value_round_trip_over_generator_domain(en):
    rng = random.Random(11)
    elided = 0
    for k in range(400):
        value = random_value(CLASSES[k % len(CLASSES)], rng)
        for variant in all_variants(value, en):
            entities = parse_spoken(list(variant.tokens), en)
            if "mer:elided" in variant.derivation and "time:hm" in variant.derivation:
                # "six fifteen" is read as the number 615: bare number readings
                # must round-trip as cardinals, so the elided-meridiem clock
                # reading is knowingly given up.
                assert [e.value.entity_class for e in entities] == [EntityClass.CARDINAL]
                elided += 1
                continue
            assert len(entities) == 1, (value, variant.text)
            e = entities[0]
            assert (e.start, e.end) == (0, len(variant.tokens))
            assert compatible(e.value, value), (value, variant.text, e.value)
    assert elided > 0


def test_rendering_round_trip(en, fr, de):
    rng = random.Random(3)
    for locale in (en, fr, de):
        for k in range(300):
            value = random_value(CLASSES[k % len(CLASSES)], rng)
            if isinstance(value, Cardinal) and 1 <= value.value <= 9:
                continue  # rendered as a word under the small-cardinal policy
            if getattr(value, "unit", None) and value.unit not in locale.units:
                continue
            if isinstance(value, Ordinal) and not locale.ordinal_suffixes:
                continue  # "41." reads the same as a sentence-final number
            if isinstance(value, Time) and value.meridiem and not locale.meridiem_written:
                value = dataclasses.replace(value, hour=value.hour % 12 + (12 if value.meridiem == "pm" else 0),
                                            meridiem=None)
            text = render_written(value, locale)
            spans = segment(text, locale).spans
            assert len(spans) == 1 and spans[0].surface == text, (locale.language, value, text)
            assert canonicalize(spans[0], locale) == value


SAFE_WORDS = ["hello", "world", "the", "cat", "sat", "on", "mat", "quietly", "Blue", "sky,", "road."]


@given(st.lists(st.sampled_from(SAFE_WORDS), max_size=12))
def test_itn_is_identity_without_entities(en, words):
    sentence = " ".join(words)
    assert itn(sentence, en) == sentence


@settings(max_examples=50)
@given(st.lists(st.sampled_from(SAFE_WORDS), min_size=1, max_size=5),
       st.lists(st.sampled_from(SAFE_WORDS), min_size=1, max_size=5),
       st.integers(10, 99999))
def test_itn_only_touches_entity_range(en, left, right, n):
    spoken = " ".join(left) + " " + " ".join(parsed_words(n, en)) + " " + " ".join(right)
    out = itn(spoken, en)
    assert out.startswith(" ".join(left) + " ") and out.endswith(" " + " ".join(right))


def parsed_words(n, en):
    return min(all_variants(Cardinal(n), en)).tokens


def test_parse_requires_english_grammar(fr):
    with pytest.raises(Exception):
        parse_spoken(["neuf"], fr)
