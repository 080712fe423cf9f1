import re

import pytest
from hypothesis import given, settings, strategies as st

from itnkit.domain import AugmentationConfig, Cardinal, Measure, Money, Time
from itnkit.generator import (
    EmptyStreamError, SpokenVariant, all_variants, diversity_factor, entity_variants, number_variants,
    rewrite,
)
from itnkit.sampling import SplitMix64, derive_seed
from itnkit.segmenter import segment
from oracles import dense_sample, number_readings

TIME_615 = ["six fifteen a m", "six fifteen in the morning", "six fifteen", "six past fifteen a m",
            "quarter past six a m", "quarter past six morning", "six and quarter a m"]


def texts(variants):
    return {v.text for v in variants}


def test_123_table_row(en):
    assert {"one hundred twenty three", "one twenty three", "one hundred and twenty three",
            "one two three"} <= texts(number_variants(123, en))


def test_single_digit_collapses(en):
    assert texts(number_variants(5, en)) == {"five"}


def test_2023_matches_grouping_oracle(en):
    assert texts(number_variants(2023, en)) == number_readings(2023)


@given(st.integers(0, 999_999))
def test_number_variants_match_oracle(en, n):
    assert texts(number_variants(n, en)) == number_readings(n)


def test_negative_numbers_get_minus(en):
    assert all(v.tokens[0] == "minus" for v in number_variants(-12, en))


def test_time_and_money_rows(en):
    unlimited = AugmentationConfig(en, max_variants_per_entity=None)
    assert set(TIME_615) <= texts(entity_variants(Time(6, 15, None, "am"), en, unlimited))
    money = texts(entity_variants(Money(1, "20", "USD"), en, unlimited))
    assert {"one dollar and twenty cents", "one dollar twenty cents", "one dollar two zero cents",
            "one point two zero dollars", "a dollar twenty cents"} <= money


def test_measure_crosses_unit_number(en):
    got = texts(all_variants(Measure(Cardinal(123), "gram"), en))
    assert {"one twenty three gram", "one twenty three grams", "one two three grams"} <= got


def test_cap_keeps_canonical_and_size(en):
    value = Money(123, None, "USD")
    full = all_variants(value, en)
    for n in range(1, len(full) + 3):
        capped = entity_variants(value, en, AugmentationConfig(en, max_variants_per_entity=n))
        assert len(capped) == min(n, len(full))
        assert "one hundred twenty three dollars" in texts(capped)


def test_cap_is_seeded(en):
    value = Money(123, None, "USD")
    a = entity_variants(value, en, AugmentationConfig(en, max_variants_per_entity=5, seed=1))
    b = entity_variants(value, en, AugmentationConfig(en, max_variants_per_entity=5, seed=1))
    assert a == b


def test_rewrite_composes_sentence(en):
    sentence = "Arrive before 6:15 am."
    pairs = rewrite(sentence, segment(sentence, en), en, AugmentationConfig(en, None))
    spoken = {p.spoken_text: p for p in pairs}
    pair = spoken["Arrive before quarter past six a m ."]
    assert pair.written == sentence
    [al] = pair.alignments
    assert pair.spoken[al.spoken_start:al.spoken_end] == ("quarter", "past", "six", "a", "m")


def test_rewrite_without_spans(en):
    assert rewrite("hello world", segment("hello world", en), en, AugmentationConfig(en)) == []


def test_rewrite_samples_cross_product_like_oracle(en):
    sentence = "Room 301 holds 123 people"
    config = AugmentationConfig(en, None, max_pairs_per_sentence=10, seed=42)
    pairs = rewrite(sentence, segment(sentence, en), en, config)
    first = sorted(texts(all_variants(Cardinal(301), en)))
    second = sorted(texts(all_variants(Cardinal(123), en)))
    assert (len(first), len(second)) == (4, 5)
    # Independent replay: mixed-radix index over the sorted lists, dense shuffle.
    rng = SplitMix64(derive_seed(42, "rewrite", sentence))
    picks = sorted(dense_sample(20, 10, rng.below))
    expected = [f"Room {first[i // 5]} holds {second[i % 5]} people" for i in picks]
    assert [p.spoken_text for p in pairs] == expected


def test_diversity_factor(en):
    sentence = "Arrive before 6:15 am."
    seg = segment(sentence, en)
    pairs = rewrite(sentence, seg, en, AugmentationConfig(en, None))
    table_only = [p for p in pairs
                  if " ".join(p.spoken[p.alignments[0].spoken_start:p.alignments[0].spoken_end]) in TIME_615]
    assert len(table_only) == 7
    assert diversity_factor(table_only) == 7
    assert diversity_factor(table_only[:1]) == 1
    with pytest.raises(EmptyStreamError):
        diversity_factor([])


values = st.one_of(
    st.builds(Cardinal, st.integers(0, 10**7)),
    st.builds(Time, st.integers(1, 12), st.integers(0, 59), st.none(), st.sampled_from(["am", "pm"])),
    st.builds(Money, st.integers(0, 5000), st.sampled_from([None, "05", "20", "99"]), st.just("USD")),
)


@settings(max_examples=60)
@given(values)
def test_variants_are_fully_spoken(en, value):
    for v in all_variants(value, en):
        assert v.tokens and not any(re.search(r"\d", t) for t in v.tokens)


@settings(max_examples=30)
@given(values, st.integers(1, 40))
def test_cardinality_monotone_in_cap(en, value, n):
    small = entity_variants(value, en, AugmentationConfig(en, max_variants_per_entity=n))
    big = entity_variants(value, en, AugmentationConfig(en, max_variants_per_entity=n + 1))
    assert len(small) <= len(big)


def test_variant_equality_ignores_derivation():
    assert SpokenVariant(("a",), ("x",)) == SpokenVariant(("a",), ("y",))
