import pytest
from hypothesis import given, strategies as st

from itnkit.domain import Cardinal, EntityClass, Measure, Money, Time
from itnkit.segmenter import MalformedSpanError, canonicalize, get_segmenter, pick, segment


def classes(sentence, locale):
    return [(s.cls.value, s.surface) for s in segment(sentence, locale).spans]


def test_pick_examples(en):
    assert pick("Arrive before 6 PM.", en)
    assert not pick("hello world", en)
    assert pick("Room 801 is open", en)


def test_time_span(en):
    [span] = segment("Arrive before 6:15 am.", en).spans
    assert span.value == Time(6, 15, None, "am") and span.surface == "6:15 am"


def test_money_span(en):
    [span] = segment("The fee is $1.20 today", en).spans
    assert span.value == Money(1, "20", "USD")


def test_two_cardinals(en):
    spans = segment("9 out of 10 statistics are wrong", en).spans
    assert [s.value for s in spans] == [Cardinal(9), Cardinal(10)]


def test_measure_claims_digits_before_cardinal(en):
    [span] = segment("It weighs 123g", en).spans
    assert span.value == Measure(Cardinal(123), "gram")


@pytest.mark.parametrize("text,expected", [
    ("Call 555-123-4567 now", [("Telephone", "555-123-4567")]),
    ("Code 00123 please", [("DigitSequence", "00123")]),
    ("Add 3/4 cup", [("Fraction", "3/4")]),
    ("On 12/31/2022 we left", [("Date", "12/31/2022")]),
    ("Her 60th birthday", [("Ordinal", "60th")]),
    ("Pi is 3.14", [("Decimal", "3.14")]),
    ("About 24k people", [("Cardinal", "24k")]),
    ("About 1.5 million people", [("Cardinal", "1.5 million")]),
])
def test_class_examples(en, text, expected):
    assert classes(text, en) == expected


def test_locale_specific_patterns(fr, de):
    assert classes("Rendez-vous à 13h30.", fr) == [("Time", "13h30")]
    assert classes("Il y avait 24 000 personnes", fr) == [("Cardinal", "24 000")]
    assert classes("Um 18 Uhr", de) == [("Time", "18 Uhr")]
    assert classes("Es waren 3 Millionen", de) == [("Cardinal", "3 Millionen")]


def test_ambiguous_date_is_flagged(en):
    [span] = segment("Due 03/04/2022.", en).spans
    assert span.ambiguous and span.value.month == 3


def test_enabled_classes_respected(en):
    seg = get_segmenter(en, [EntityClass.CARDINAL]).segment("Arrive before 6:15 am with 3 bags")
    assert all(s.cls is EntityClass.CARDINAL for s in seg.spans)


def test_canonicalize_magnitude_suffix(en):
    [span] = segment("Lift 10K lb daily", en).spans
    assert canonicalize(span, en) == Measure(Cardinal(10000), "pound")


def test_canonicalize_detects_drift(en):
    [span] = segment("Lift 10K lb daily", en).spans
    broken = type(span)(span.cls, 0, 3, "abc", span.value)
    with pytest.raises(MalformedSpanError):
        canonicalize(broken, en)


time_texts = st.builds("{}:{:02d} {}".format, st.integers(1, 12), st.integers(0, 59),
                       st.sampled_from(["am", "pm", "AM", "p.m."]))


@given(time_texts, st.sampled_from(["At ", "Leave at ", ""]), st.sampled_from([".", " sharp", ""]))
def test_time_beats_cardinal_on_collisions(en, text, before, after):
    spans = segment(before + text + after, en).spans
    assert [s.cls for s in spans] == [EntityClass.TIME]


@given(st.text(alphabet=st.sampled_from("0123456789 .,:/-$%abcgkmp"), max_size=40))
def test_segmentation_invariants(en, sentence):
    seg = segment(sentence, en)
    last = 0
    for span in seg.spans:
        assert last <= span.start < span.end <= len(sentence)
        assert sentence[span.start:span.end] == span.surface
        last = span.end
    assert seg == segment(sentence, en)
    assert pick(sentence, en) == (bool(seg.spans) and any(c.isdigit() for c in sentence))
