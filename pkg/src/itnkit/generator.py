"""Spoken-variant generation and sentence rewriting.

``number_variants`` expands an integer into every reading the English grammar
admits: the long form, the long form with "and", and grouped readings where
the digit string is cut into contiguous chunks of one to three digits and each
chunk is read on its own ("twenty twenty three", "one two three").  A
grouping is admitted only when the chunk readings cannot fuse back into a
different number when heard in sequence:

* a chunk ending in a bare tens word ("twenty") may not be followed by a chunk
  whose reading starts with a non-zero unit word (a single digit, or any
  three-digit chunk);
* a three-digit chunk ending in "hundred" may only be followed by a zero;
* a chunk with a leading zero must be a single digit, read "zero" or "oh"
  (one choice for the whole reading).

Entity-level expansion composes these with class-specific templates and caps
the result with the seeded sampler.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction as Rational
from functools import lru_cache
from typing import Iterable, Optional

from .domain import (
    Alignment,
    AugmentationConfig,
    CanonicalValue,
    Cardinal,
    Date,
    Decimal,
    DigitSequence,
    Fraction,
    LocaleProfile,
    Measure,
    Money,
    Ordinal,
    SpokenWrittenPair,
    Telephone,
    Time,
    value_to_json,
)
from .sampling import SplitMix64, derive_seed, sample_indices
from .segmenter import SegmentationResult
from .verbalizer import (
    MAX_NUMBER,
    below_hundred,
    cardinal_words,
    currency_words,
    date_words,
    denominator_words,
    digit_words,
    has_and_form,
    ordinal_words,
    require_grammar,
    verbal_tokens,
    year_words,
)

ZERO_WORDS = ("zero", "oh")


class EmptyStreamError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SpokenVariant:
    tokens: tuple[str, ...]
    derivation: tuple[str, ...] = field(default=(), compare=False)

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    def __hash__(self):
        return hash(self.tokens)


# Number readings


def _chunk_head(chunk: str) -> str:
    if chunk == "0":
        return "zero"
    return "unit" if len(chunk) in (1, 3) else "tens"


def _chunk_tail(chunk: str) -> str:
    value = int(chunk)
    if len(chunk) == 3 and value % 100 == 0:
        return "hundred"
    if len(chunk) >= 2 and value % 100 >= 20 and value % 10 == 0:
        return "tens"
    return "other"


def _allowed(tail: Optional[str], head: str) -> bool:
    if tail == "tens" and head == "unit":
        return False
    if tail == "hundred" and head != "zero":
        return False
    return True


@lru_cache(maxsize=4096)
def _groupings(digits: str, tail: Optional[str] = None) -> tuple[tuple[str, ...], ...]:
    if not digits:
        return ((),)
    out = []
    for size in (1, 2, 3):
        if size > len(digits):
            break
        chunk = digits[:size]
        if size > 1 and chunk[0] == "0":
            continue
        if not _allowed(tail, _chunk_head(chunk)):
            continue
        for rest in _groupings(digits[size:], _chunk_tail(chunk)):
            out.append((chunk,) + rest)
    return tuple(out)


def _chunk_words(chunk: str, zero: str, locale: LocaleProfile) -> list[str]:
    if chunk == "0":
        return [zero]
    return cardinal_words(int(chunk), locale)


def number_variants(n: int, locale: LocaleProfile) -> set[SpokenVariant]:
    require_grammar(locale)
    if n < 0:
        return {
            SpokenVariant(("minus",) + v.tokens, ("minus",) + v.derivation)
            for v in number_variants(-n, locale)
        }
    if n >= MAX_NUMBER:
        raise ValueError(f"{n} is out of range for number_variants")
    found: dict[tuple[str, ...], SpokenVariant] = {}

    def add(tokens, *derivation):
        tokens = tuple(tokens)
        if tokens not in found:
            found[tokens] = SpokenVariant(tokens, derivation)

    add(cardinal_words(n, locale), "long")
    if has_and_form(n):
        add(cardinal_words(n, locale, with_and=True), "long-and")
    digits = str(n)
    for grouping in _groupings(digits):
        if len(grouping) < 2:
            continue
        shape = "group:" + "-".join(str(len(c)) for c in grouping)
        zero_choices = ZERO_WORDS if "0" in grouping else ZERO_WORDS[:1]
        for zero in zero_choices:
            tokens = []
            for chunk in grouping:
                tokens += _chunk_words(chunk, zero, locale)
            add(tokens, shape, f"zero={zero}")
    return set(found.values())


def _texts(variants: Iterable[SpokenVariant]) -> list[tuple[str, ...]]:
    return sorted(v.tokens for v in variants)


# Class templates. Each returns {tokens: derivation}.


class _Collector:
    def __init__(self):
        self.found: dict[tuple[str, ...], tuple[str, ...]] = {}

    def add(self, tokens, *derivation):
        tokens = tuple(t for part in tokens for t in part)
        self.found.setdefault(tokens, derivation)

    def variants(self) -> set[SpokenVariant]:
        return {SpokenVariant(t, d) for t, d in self.found.items()}


def _decimal_readings(value: Decimal, locale: LocaleProfile) -> list[tuple[tuple[str, ...], str]]:
    sign = ("minus",) if value.negative else ()
    out = []
    for zero in ZERO_WORDS:
        frac = tuple(digit_words(value.fraction_digits, locale, zero=zero))
        for iv in _texts(number_variants(value.integer, locale)):
            out.append((sign + iv + ("point",) + frac, f"decimal:zero={zero}"))
        if value.integer == 0:
            out.append((sign + ("point",) + frac, "decimal:bare-point"))
    return out


def _cardinal_readings(value: int, locale: LocaleProfile) -> list[tuple[tuple[str, ...], str]]:
    return [(t, "number") for t in _texts(number_variants(value, locale))]


def _magnitude_readings(mag, locale):
    if isinstance(mag, Decimal):
        return _decimal_readings(mag, locale)
    return _cardinal_readings(mag.value, locale)


def _meridiem_forms(t: Time) -> list[tuple[tuple[str, ...], str]]:
    if t.meridiem is None:
        return [((), "mer:none")]
    if t.meridiem == "am":
        period = "morning"
        spelled = ("a", "m")
    else:
        period = "afternoon" if t.hour == 12 or t.hour <= 4 else "evening"
        spelled = ("p", "m")
    return [
        (spelled, "mer:spelled"),
        (("in", "the", period), "mer:expanded"),
        ((period,), "mer:period"),
        ((), "mer:elided"),
    ]


def _time_variants(t: Time, locale: LocaleProfile) -> set[SpokenVariant]:
    c = _Collector()
    hour = tuple(cardinal_words(t.hour, locale))
    if t.minute == 0:
        minute: tuple[str, ...] = ()
    elif t.minute < 10:
        minute = ("oh", locale.words_for("unit", t.minute))
    else:
        minute = tuple(cardinal_words(t.minute, locale))

    hours_form = list(hour) + ["hour" if t.hour == 1 else "hours"]
    if t.minute or t.second is not None:
        hours_form += cardinal_words(t.minute, locale) + ["minute" if t.minute == 1 else "minutes"]
    if t.second is not None:
        hours_form += cardinal_words(t.second, locale) + ["second" if t.second == 1 else "seconds"]

    cores: list[tuple[tuple[str, ...], str]] = []
    if t.second is not None or t.meridiem is None:
        cores.append((tuple(hours_form), "time:hours"))
    if t.second is None:
        if t.meridiem is not None or t.minute:
            cores.append((hour + minute, "time:hm"))
        if t.minute:
            cores.append((hour + ("past",) + tuple(cardinal_words(t.minute, locale)), "time:h-past-m"))
        if t.minute in (15, 30):
            word = "quarter" if t.minute == 15 else "half"
            cores.append(((word, "past") + hour, f"time:{word}-past"))
            cores.append((hour + ("and", word), f"time:and-{word}"))
    for core, core_rule in cores:
        for mer, mer_rule in _meridiem_forms(t):
            if t.meridiem is not None and not mer and core_rule != "time:hm":
                continue
            c.add((core, mer), core_rule, mer_rule)
    return c.variants()


def _date_variants(d: Date, locale: LocaleProfile) -> set[SpokenVariant]:
    c = _Collector()
    month = (locale.months[d.month - 1],) if d.month is not None else None
    years: list[tuple[str, ...]] = [()]
    if d.year is not None:
        years = [tuple(year_words(d.year, locale))] + _texts(number_variants(d.year, locale))
    if d.day is None:
        for y in years:
            c.add((month or (), y), "date:month-year")
        return c.variants()
    cardinal = tuple(cardinal_words(d.day, locale))
    ordinal = tuple(ordinal_words(d.day, locale))
    if month is None:
        for day in (cardinal, ordinal):
            for y in years:
                c.add((day, y), "date:day")
        return c.variants()
    for y in years:
        c.add((cardinal, month, y), "date:card-day-month")
        c.add((ordinal, month, y), "date:ord-day-month")
        c.add((("the",), ordinal, ("of",), month, y), "date:the-ord-of-month")
        c.add((month, ordinal, y), "date:month-ord-day")
        c.add((month, ("the",), ordinal, y), "date:month-the-ord-day")
    c.add((tuple(date_words(d, locale)),), "date:canonical")
    return c.variants()


def _money_variants(m: Money, locale: LocaleProfile) -> set[SpokenVariant]:
    c = _Collector()
    info = locale.currencies[m.currency]
    minor = int(m.minor) if m.minor else 0
    major_units = [(u,) for u in dict.fromkeys(info.major)]
    plural_major = tuple(currency_words(m.currency, True, locale))
    majors = _cardinal_readings(m.major, locale)
    if minor:
        minor_unit = tuple(currency_words(m.currency, minor != 1, locale, minor=True))
        minor_readings = [tuple(cardinal_words(minor, locale))]
        for zero in ZERO_WORDS:
            minor_readings.append(tuple(digit_words(m.minor, locale, zero=zero)))
        if m.major == 0:
            for mr in minor_readings:
                c.add((mr, minor_unit), "money:minor-only")
        for maj, _ in majors:
            for unit in major_units:
                for mr in minor_readings:
                    c.add((maj, unit, ("and",), mr, minor_unit), "money:major-and-minor")
                    c.add((maj, unit, mr, minor_unit), "money:major-minor")
            for zero in ZERO_WORDS:
                point = ("point",) + tuple(digit_words(m.minor, locale, zero=zero))
                c.add((maj, point, plural_major), "money:point")
        if m.major == 1:
            for mr in minor_readings:
                c.add((("a",), major_units[0], mr, minor_unit), "money:article")
                c.add((("a",), major_units[0], ("and",), mr, minor_unit), "money:article")
    else:
        zero_minor = ()
        if info.minor:
            zero_minor = ("zero", info.minor[-1])
        for maj, _ in majors:
            for unit in major_units:
                c.add((maj, unit), "money:major")
                if zero_minor:
                    c.add((maj, unit, zero_minor), "money:zero-minor")
                    c.add((maj, unit, ("and",), zero_minor), "money:zero-minor")
        if m.major == 1:
            c.add((("a",), major_units[0]), "money:article")
    return c.variants()


def _measure_variants(m: Measure, locale: LocaleProfile) -> set[SpokenVariant]:
    c = _Collector()
    unit = locale.units[m.unit]
    forms = [tuple(f.split()) for f in dict.fromkeys(unit.singular + unit.plural)]
    for reading, rule in _magnitude_readings(m.magnitude, locale):
        for form in forms:
            c.add((reading, form), rule, "unit")
    return c.variants()


def _fraction_variants(f: Fraction, locale: LocaleProfile) -> set[SpokenVariant]:
    c = _Collector()
    wholes: list[tuple[str, ...]] = [()]
    if f.whole is not None:
        wholes = [w + ("and",) for w in _texts(number_variants(f.whole, locale))]
    num = tuple(cardinal_words(f.numerator, locale))
    plural = f.numerator != 1
    cores = []
    if f.denominator > 1:
        styles = ("canonical",) if f.denominator == 2 else ("canonical", "ordinal")
        for style in styles:
            den = tuple(denominator_words(f.denominator, plural, locale, style))
            cores.append((num + den, f"fraction:{style}"))
            if f.numerator == 1:
                cores.append((("a",) + den, f"fraction:article-{style}"))
    cores.append((num + ("over",) + tuple(cardinal_words(f.denominator, locale)), "fraction:over"))
    for whole in wholes:
        for core, rule in cores:
            c.add((whole, core), rule)
    return c.variants()


def _telephone_variants(t: Telephone, locale: LocaleProfile) -> set[SpokenVariant]:
    c = _Collector()
    for zero in ZERO_WORDS:
        options = []
        for i, group in enumerate(t.groups):
            opts = [(tuple(digit_words(group, locale, zero=zero)), "digits")]
            last = i == len(t.groups) - 1
            if last and len(group) == 4 and group[0] != "0" and group[2] != "0":
                pairs = tuple(below_hundred(int(group[:2]), locale) + below_hundred(int(group[2:]), locale))
                opts.append((pairs, "pairs"))
            options.append(opts)
        for combo in itertools.product(*options):
            c.add(tuple(tok for tok, _ in combo), "telephone", f"zero={zero}",
                  *(rule for _, rule in combo))
    return c.variants()


def _digit_sequence_variants(d: DigitSequence, locale: LocaleProfile) -> set[SpokenVariant]:
    return {
        SpokenVariant(tuple(digit_words(d.digits, locale, zero=zero)), ("digits", f"zero={zero}"))
        for zero in ZERO_WORDS
    }


def all_variants(value: CanonicalValue, locale: LocaleProfile) -> set[SpokenVariant]:
    """Uncapped variant set, always containing the canonical verbal form."""
    require_grammar(locale)
    if isinstance(value, Cardinal):
        out = number_variants(value.value, locale)
    elif isinstance(value, Ordinal):
        out = {SpokenVariant(tuple(ordinal_words(value.value, locale)), ("ordinal",))}
        if has_and_form(value.value):
            out.add(SpokenVariant(tuple(ordinal_words(value.value, locale, with_and=True)), ("ordinal-and",)))
    elif isinstance(value, Decimal):
        out = {SpokenVariant(t, (rule,)) for t, rule in _decimal_readings(value, locale)}
    elif isinstance(value, Fraction):
        out = _fraction_variants(value, locale)
    elif isinstance(value, Money):
        out = _money_variants(value, locale)
    elif isinstance(value, Time):
        out = _time_variants(value, locale)
    elif isinstance(value, Date):
        out = _date_variants(value, locale)
    elif isinstance(value, Measure):
        out = _measure_variants(value, locale)
    elif isinstance(value, Telephone):
        out = _telephone_variants(value, locale)
    elif isinstance(value, DigitSequence):
        out = _digit_sequence_variants(value, locale)
    else:
        raise TypeError(f"not a canonical value: {value!r}")
    canonical = SpokenVariant(tuple(verbal_tokens(value, locale)), ("canonical",))
    out = set(out)
    out.discard(canonical)
    out.add(canonical)
    return out


def entity_variants(value: CanonicalValue, locale: LocaleProfile,
                    config: AugmentationConfig) -> set[SpokenVariant]:
    full = all_variants(value, locale)
    cap = config.max_variants_per_entity
    if cap is None or len(full) <= cap:
        return full
    canonical = tuple(verbal_tokens(value, locale))
    rest = sorted((v for v in full if v.tokens != canonical), key=lambda v: v.text)
    rng = SplitMix64(derive_seed(config.seed, "entity", value_to_json(value)))
    chosen = {rest[i] for i in sample_indices(len(rest), cap - 1, rng)}
    chosen.add(next(v for v in full if v.tokens == canonical))
    return chosen


# Sentence rewriting


def _tokens(text: str) -> list[str]:
    return text.split()


def rewrite(sentence: str, segmentation: SegmentationResult, locale: LocaleProfile,
            config: AugmentationConfig) -> list[SpokenWrittenPair]:
    spans = [s for s in segmentation.spans if s.cls in config.enabled_classes]
    if not spans:
        return []
    per_entity = [sorted(entity_variants(s.value, locale, config), key=lambda v: v.text) for s in spans]
    sizes = [len(v) for v in per_entity]
    total = 1
    for size in sizes:
        total *= size
    if len(spans) == 1 or total <= config.max_pairs_per_sentence:
        picks = list(range(total))
    else:
        rng = SplitMix64(derive_seed(config.seed, "rewrite", sentence))
        picks = sorted(sample_indices(total, config.max_pairs_per_sentence, rng))

    gaps = []
    cursor = 0
    for s in spans:
        gaps.append(_tokens(sentence[cursor:s.start]))
        cursor = s.end
    tail = _tokens(sentence[cursor:])

    pairs = []
    for index in picks:
        choice = []
        for size in reversed(sizes):
            index, r = divmod(index, size)
            choice.append(r)
        choice.reverse()
        spoken: list[str] = []
        alignments = []
        for span, gap, variants, r in zip(spans, gaps, per_entity, choice):
            spoken += gap
            start = len(spoken)
            spoken += variants[r].tokens
            alignments.append(Alignment(start, len(spoken), span))
        spoken += tail
        pairs.append(SpokenWrittenPair(tuple(spoken), sentence, locale.language, tuple(alignments), "augmented"))
    return pairs


def canonical_pair(sentence: str, segmentation: SegmentationResult, locale: LocaleProfile,
                   config: Optional[AugmentationConfig] = None) -> Optional[SpokenWrittenPair]:
    """The single pair a conventional normalizer would emit."""
    spans = [s for s in segmentation.spans if config is None or s.cls in config.enabled_classes]
    if not spans:
        return None
    spoken: list[str] = []
    alignments = []
    cursor = 0
    for s in spans:
        spoken += _tokens(sentence[cursor:s.start])
        start = len(spoken)
        spoken += verbal_tokens(s.value, locale)
        alignments.append(Alignment(start, len(spoken), s))
        cursor = s.end
    spoken += _tokens(sentence[cursor:])
    return SpokenWrittenPair(tuple(spoken), sentence, locale.language, tuple(alignments), "augmented")


def diversity_factor(pairs: Iterable[SpokenWrittenPair]) -> Rational:
    """Mean count of distinct spoken variants per distinct written entity surface."""
    seen: dict[str, set[tuple[str, ...]]] = {}
    for pair in pairs:
        for al in pair.alignments:
            seen.setdefault(al.span.surface, set()).add(pair.spoken[al.spoken_start:al.spoken_end])
    if not seen:
        raise EmptyStreamError("diversity_factor needs at least one aligned entity")
    return Rational(sum(len(v) for v in seen.values()), len(seen))
