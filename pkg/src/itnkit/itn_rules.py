"""Rule-based inverse text normalization.

The parser inverts the variant grammar of :mod:`itnkit.generator`.  Number
words are read greedily into *segments* (one long-form number each, e.g.
"two thousand and twenty three"); adjacent segments form a *run* whose value
is the concatenation of the segment digit strings ("twenty twenty three" is
the run [20][23] = 2023).  Entity matchers are anchored on local keywords —
meridiem words, currency words, unit words, month names, "point", "over",
"past" — and the longest match at each position wins, ties going to the
earlier class in the segmentation precedence.  A bare run with no keyword is
a Cardinal, a Telephone (7, 10 or 11 digits read in groups) or a
DigitSequence (leading zero, or six or more digits read in groups).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .domain import (
    CanonicalValue,
    Cardinal,
    Date,
    Decimal,
    DigitSequence,
    EntityClass,
    Fraction,
    LocaleProfile,
    Measure,
    Money,
    Ordinal,
    Telephone,
    Time,
    bundled_locale,
)
from .segmenter import PRECEDENCE
from .verbalizer import require_grammar

EXACT = "exact"
AMBIGUOUS = "ambiguous"

_RANK = {cls: i for i, cls in enumerate(PRECEDENCE)}

_LEADING = "\"'([{¿¡«“‘"
_TRAILING = ".,;:!?\"')]}»”’…"

_MERIDIEM_PHRASES = {
    ("a", "m"): "am", ("p", "m"): "pm",
    ("am",): "am", ("pm",): "pm", ("a.m",): "am", ("p.m",): "pm",
    ("in", "the", "morning"): "am", ("morning",): "am",
    ("in", "the", "afternoon"): "pm", ("afternoon",): "pm",
    ("in", "the", "evening"): "pm", ("evening",): "pm",
    ("at", "night"): "pm",
}
_MERIDIEM_STARTS = {k[0] for k in _MERIDIEM_PHRASES}
_MERIDIEM_SIZES = sorted({len(k) for k in _MERIDIEM_PHRASES}, reverse=True)
_NEGATIVE = ("minus", "negative")


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int

    @property
    def norm(self) -> str:
        return self.text.lower()


@dataclass(frozen=True)
class ParsedEntity:
    start: int  # token index, inclusive
    end: int    # token index, exclusive
    value: CanonicalValue
    confidence: str = EXACT

    @property
    def cls(self) -> EntityClass:
        return self.value.entity_class


def tokenize(text: str) -> list[Token]:
    """Whitespace tokens with leading/trailing punctuation split off."""
    out = []
    for m in re.finditer(r"\S+", text):
        word, start = m.group(), m.start()
        lead = []
        while word and word[0] in _LEADING:
            lead.append(Token(word[0], start, start + 1))
            word, start = word[1:], start + 1
        trail = []
        while word and word[-1] in _TRAILING:
            trail.append(Token(word[-1], start + len(word) - 1, start + len(word)))
            word = word[:-1]
        out += lead
        if word:
            out.append(Token(word, start, start + len(word)))
        out += reversed(trail)
    return out


# Number segments


@dataclass(frozen=True)
class Segment:
    value: int
    end: int
    ordinal: bool = False
    zero_word: Optional[str] = None  # "zero" / "oh" for a lone zero segment

    @property
    def digits(self) -> str:
        return "0" if self.zero_word is not None else str(self.value)


class Run:
    """Adjacent cardinal segments; the value is their digit concatenation."""

    __slots__ = ("segments", "start", "end", "digits", "value")

    def __init__(self, segments: tuple[Segment, ...], start: int):
        self.segments = segments
        self.start = start
        self.end = segments[-1].end
        self.digits = "".join(s.digits for s in segments)
        self.value = int(self.digits)

    @property
    def single(self) -> bool:
        return len(self.segments) == 1


class _Lexicon:
    """Role tables for one locale, built once."""

    def __init__(self, locale: LocaleProfile):
        self.locale = locale
        self.unit, self.teen, self.tens, self.ordinal = {}, {}, {}, {}
        self.hundred = set()
        self.denominator = {}
        for word, nw in locale.number_words.items():
            table = {"unit": self.unit, "teen": self.teen, "tens": self.tens,
                     "ordinal": self.ordinal, "denominator": self.denominator}.get(nw.role)
            if table is not None:
                table[word] = nw.value
            elif nw.role == "hundred":
                self.hundred.add(word)
        self.magnitude = {w: 10**p for w, p in locale.magnitude_lexicon.items()}
        self.ordinal_magnitude = {w: v for w, v in self.ordinal.items() if v >= 100}
        self.small_ordinal = {w: v for w, v in self.ordinal.items() if v < 100}
        self.zero_words = {w for w, v in self.unit.items() if v == 0}
        self.units = locale.unit_by_token()
        self.unit_lengths = sorted({len(k) for k in self.units}, reverse=True)
        self.currency_major = {}
        self.currency_minor = {}
        for code, info in locale.currencies.items():
            for i, w in enumerate(info.major):
                self.currency_major.setdefault(w, (code, i > 0))
            for w in info.minor:
                self.currency_minor.setdefault(w, code)
        self.months = {m.lower(): i + 1 for i, m in enumerate(locale.months)}

    def plural_denominator(self, word: str) -> Optional[int]:
        if word == "halves":
            return 2
        if word.endswith("s"):
            base = word[:-1]
            if base in self.denominator:
                return self.denominator[base]
            if base in self.ordinal and self.ordinal[base] >= 3:
                return self.ordinal[base]
        return None


@lru_cache(maxsize=16)
def _lexicon(locale: LocaleProfile) -> _Lexicon:
    return _Lexicon(locale)


class _Parser:
    def __init__(self, words: Sequence[str], locale: LocaleProfile):
        self.w = list(words)
        self.n = len(self.w)
        self.lx = _lexicon(locale)
        self.locale = locale
        self._seg_cache: dict[int, Optional[Segment]] = {}
        self._run_cache: dict[int, Optional[Run]] = {}

    def at(self, i: int) -> str:
        return self.w[i] if 0 <= i < self.n else ""

    # Long-form numbers

    def _tail(self, i: int) -> Optional[tuple[int, int, bool]]:
        """Sub-hundred part: tens [unit|ordinal] | teen | unit (1-9) | ordinal."""
        lx, w = self.lx, self.at(i)
        if w in lx.tens:
            nxt = self.at(i + 1)
            if nxt in lx.unit and lx.unit[nxt] > 0 and nxt not in lx.zero_words:
                return lx.tens[w] + lx.unit[nxt], i + 2, False
            if nxt in lx.small_ordinal and 1 <= lx.small_ordinal[nxt] <= 9:
                return lx.tens[w] + lx.small_ordinal[nxt], i + 2, True
            return lx.tens[w], i + 1, False
        if w in lx.teen:
            return lx.teen[w], i + 1, False
        if w in lx.unit and lx.unit[w] > 0:
            return lx.unit[w], i + 1, False
        if w in lx.small_ordinal:
            return lx.small_ordinal[w], i + 1, True
        return None

    def _below_thousand(self, i: int) -> Optional[tuple[int, int, bool]]:
        lx, w = self.lx, self.at(i)
        if w in lx.unit and lx.unit[w] > 0:
            nxt = self.at(i + 1)
            if nxt in lx.hundred:
                value, j = lx.unit[w] * 100, i + 2
                k = j + 1 if self.at(j) == "and" else j
                tail = self._tail(k)
                if tail is not None:
                    return value + tail[0], tail[1], tail[2]
                return value, j, False
            if lx.ordinal_magnitude.get(nxt) == 100:
                return lx.unit[w] * 100, i + 2, True
        return self._tail(i)

    def segment(self, i: int) -> Optional[Segment]:
        if i in self._seg_cache:
            return self._seg_cache[i]
        seg = self._segment(i)
        self._seg_cache[i] = seg
        return seg

    def _segment(self, i: int) -> Optional[Segment]:
        lx, w = self.lx, self.at(i)
        if w in lx.zero_words:
            return Segment(0, i + 1, zero_word=w)
        first = self._below_thousand(i)
        if first is None:
            return None
        group, j, ordinal = first
        total, last_power = 0, None
        while not ordinal:
            nxt = self.at(j)
            if nxt in lx.magnitude and (last_power is None or lx.magnitude[nxt] < last_power):
                last_power = lx.magnitude[nxt]
                total += group * last_power
                group, j = 0, j + 1
                k = j + 1 if self.at(j) == "and" else j
                more = self._below_thousand(k)
                if more is None:
                    break
                # a following group must not itself outrank the magnitude
                group, j, ordinal = more
                continue
            if nxt in lx.ordinal_magnitude and lx.ordinal_magnitude[nxt] >= 1000 and (
                last_power is None or lx.ordinal_magnitude[nxt] < last_power
            ):
                total += group * lx.ordinal_magnitude[nxt]
                return Segment(total, j + 1, ordinal=True)
            break
        return Segment(total + group, j, ordinal=ordinal)

    def run(self, i: int) -> Optional[Run]:
        """Maximal run of cardinal segments starting at i."""
        if i in self._run_cache:
            return self._run_cache[i]
        segs = []
        j = i
        while True:
            seg = self.segment(j)
            if seg is None or seg.ordinal:
                break
            segs.append(seg)
            j = seg.end
        run = None
        if segs:
            if len(segs) == 1 and segs[0].zero_word and segs[0].zero_word != "zero":
                run = None  # a lone "oh" is an interjection, not a number
            else:
                run = Run(tuple(segs), i)
        self._run_cache[i] = run
        return run

    def single(self, i: int) -> Optional[Segment]:
        seg = self.segment(i)
        if seg is None or seg.ordinal or (seg.zero_word and seg.zero_word != "zero"):
            return None
        return seg

    def meridiem(self, i: int) -> Optional[tuple[str, int]]:
        if self.at(i) not in _MERIDIEM_STARTS:
            return None
        for size in _MERIDIEM_SIZES:
            key = tuple(self.w[i:i + size])
            if len(key) == size and key in _MERIDIEM_PHRASES:
                return _MERIDIEM_PHRASES[key], i + size
        return None

    # Entity matchers: each returns (end, value, confidence) or None.

    def number_entity(self, i: int):
        negative = self.at(i) in _NEGATIVE
        run = self.run(i + 1 if negative else i)
        if run is None:
            return None
        digits = run.digits
        if negative:
            return run.end, Cardinal(-run.value), EXACT if run.single else AMBIGUOUS
        if run.single:
            return run.end, Cardinal(run.value), EXACT
        if digits[0] == "0":
            return run.end, DigitSequence(digits), EXACT
        size = len(digits)
        if size == 7:
            return run.end, Telephone((digits[:3], digits[3:])), AMBIGUOUS
        if size == 10:
            return run.end, Telephone((digits[:3], digits[3:6], digits[6:])), AMBIGUOUS
        if size == 11 and digits[0] == "1":
            return run.end, Telephone((digits[:1], digits[1:4], digits[4:7], digits[7:])), AMBIGUOUS
        if size >= 6:
            return run.end, DigitSequence(digits), AMBIGUOUS
        return run.end, Cardinal(int(digits)), AMBIGUOUS

    def ordinal_entity(self, i: int):
        seg = self.segment(i)
        if seg is not None and seg.ordinal and seg.value >= 1:
            return seg.end, Ordinal(seg.value), EXACT
        return None

    def _point_digits(self, j: int) -> Optional[tuple[str, int]]:
        if self.at(j) != "point":
            return None
        segs = []
        k = j + 1
        while True:
            seg = self.segment(k)
            if seg is None or seg.ordinal:
                break
            segs.append(seg)
            k = seg.end
        if not segs:
            return None
        return "".join(s.digits for s in segs), k

    def decimal(self, i: int) -> Optional[tuple[Decimal, int]]:
        negative = self.at(i) in _NEGATIVE
        j = i + 1 if negative else i
        run = self.run(j)
        integer = 0
        if run is not None:
            integer, j = run.value, run.end
        frac = self._point_digits(j)
        if frac is None:
            return None
        return Decimal(integer, frac[0], negative), frac[1]

    def decimal_entity(self, i: int):
        dec = self.decimal(i)
        if dec is None:
            return None
        return dec[1], dec[0], EXACT

    def _unit(self, j: int):
        for size in self.lx.unit_lengths:
            key = tuple(self.w[j:j + size])
            if len(key) == size and key in self.lx.units:
                return self.lx.units[key][0], j + size
        return None

    def measure_entity(self, i: int):
        mags = []
        dec = self.decimal(i)
        if dec is not None:
            mags.append((dec[0], dec[1]))
        num = self.number_entity(i)
        if num is not None and isinstance(num[1], Cardinal):
            mags.append((num[1], num[0]))
        elif num is not None and isinstance(num[1], (DigitSequence, Telephone)):
            digits = num[1].digits
            if digits[0] != "0":
                mags.append((Cardinal(int(digits)), num[0]))
        best = None
        for mag, j in mags:
            unit = self._unit(j)
            if unit is not None and (best is None or unit[1] > best[0]):
                best = (unit[1], Measure(mag, unit[0]), EXACT)
        return best

    def _minor(self, j: int, code: str) -> Optional[tuple[Optional[str], int]]:
        info = self.locale.currencies[code]
        run = self.run(j)
        if run is None or not info.minor_digits:
            return None
        after = self.at(run.end)
        if self.lx.currency_minor.get(after) is None or after not in info.minor:
            return None
        digits = run.digits if not run.single else str(run.value).zfill(info.minor_digits)
        if len(digits) != info.minor_digits:
            return None
        if int(digits) == 0:
            return None, run.end + 1
        return digits, run.end + 1

    def money_entity(self, i: int):
        lx = self.lx
        candidates = []
        # major amount as "a", a number run, or a decimal
        majors = []
        if self.at(i) == "a":
            majors.append((1, None, i + 1))
        run = self.run(i)
        if run is not None:
            majors.append((run.value, None, run.end))
        dec = self.decimal(i)
        if dec is not None and not dec[0].negative:
            majors.append((dec[0].integer, dec[0].fraction_digits, dec[1]))
        for major, frac, j in majors:
            cur = lx.currency_major.get(self.at(j))
            if cur is None:
                continue
            code = cur[0]
            info = self.locale.currencies[code]
            end = j + 1
            minor = None
            if frac is not None:
                if len(frac) != info.minor_digits:
                    continue
                minor = frac if int(frac) else None
            else:
                k = end + 1 if self.at(end) == "and" else end
                tail = self._minor(k, code)
                if tail is not None:
                    minor, end = tail
            candidates.append((end, Money(major, minor, code), EXACT))
        # minor amount on its own: "twenty cents"
        run = self.run(i)
        if run is not None:
            code = lx.currency_minor.get(self.at(run.end))
            if code is not None:
                tail = self._minor(i, code)
                if tail is not None and tail[0] is not None:
                    candidates.append((tail[1], Money(0, tail[0], code), AMBIGUOUS))
        return max(candidates, key=lambda c: c[0], default=None)

    def _denominator(self, j: int, plural: bool) -> Optional[tuple[int, int]]:
        lx = self.lx
        w = self.at(j)
        if plural:
            den = lx.plural_denominator(w)
            if den is not None:
                return den, j + 1
            # multi-word plural ordinal: "one hundredths", "twenty thirds"
            for k in range(j + 1, min(j + 6, self.n)):
                if lx.plural_denominator(self.at(k)) is None and not self.at(k).endswith("s"):
                    continue
                sub = _Parser(self.w[j:k] + [self.at(k)[:-1]], self.locale)
                seg = sub.segment(0)
                if seg is not None and seg.ordinal and seg.end == k - j + 1 and seg.value >= 3:
                    return seg.value, k + 1
                break
            return None
        if w in lx.denominator:
            return lx.denominator[w], j + 1
        seg = self.segment(j)
        if seg is not None and seg.ordinal and seg.value >= 3:
            return seg.value, seg.end
        return None

    def _simple_fraction(self, i: int) -> Optional[tuple[int, int, int]]:
        if self.at(i) == "a":
            den = self._denominator(i + 1, plural=False)
            if den is not None:
                return 1, den[0], den[1]
            return None
        num = self.single(i)
        if num is None:
            return None
        if self.at(num.end) == "over":
            den = self.single(num.end + 1)
            if den is not None and den.value > 0:
                return num.value, den.value, den.end
            return None
        den = self._denominator(num.end, plural=num.value != 1)
        if den is not None:
            return num.value, den[0], den[1]
        return None

    def fraction_entity(self, i: int):
        best = None
        simple = self._simple_fraction(i)
        if simple is not None:
            best = (simple[2], Fraction(simple[0], simple[1]), EXACT)
        run = self.run(i)
        if run is not None and self.at(run.end) == "and":
            rest = self._simple_fraction(run.end + 1)
            if rest is not None and (best is None or rest[2] > best[0]):
                best = (rest[2], Fraction(rest[0], rest[1], run.value), EXACT)
        return best

    def time_entity(self, i: int):
        found = []

        def finish(end, hour, minute, second=None):
            mer = self.meridiem(end)
            meridiem = None
            if mer is not None:
                meridiem, end = mer
            try:
                return end, Time(hour, minute, second, meridiem), EXACT
            except ValueError:
                return None

        w = self.at(i)
        # quarter/half past H
        if w in ("quarter", "half") and self.at(i + 1) == "past":
            h = self.single(i + 2)
            if h is not None:
                found.append(finish(h.end, h.value, 15 if w == "quarter" else 30))
        h = self.single(i)
        if h is not None:
            nxt = self.at(h.end)
            # H hours [M minutes] [and S seconds]
            if nxt in ("hour", "hours"):
                end, minute, second = h.end + 1, 0, None
                m = self.single(end)
                if m is not None and self.at(m.end) in ("minute", "minutes"):
                    minute, end = m.value, m.end + 1
                k = end + 1 if self.at(end) == "and" else end
                s = self.single(k)
                if s is not None and self.at(s.end) in ("second", "seconds"):
                    second, end = s.value, s.end + 1
                found.append(finish(end, h.value, minute, second))
            # H past M
            if nxt == "past":
                m = self.single(h.end + 1)
                if m is not None and m.value > 0:
                    found.append(finish(m.end, h.value, m.value))
            # H and quarter/half
            if nxt == "and" and self.at(h.end + 1) in ("quarter", "half"):
                found.append(finish(h.end + 2, h.value, 15 if self.at(h.end + 1) == "quarter" else 30))
        # H M meridiem (the meridiem is required here)
        run = self.run(i)
        if run is not None and not run.segments[0].zero_word:
            hour = run.segments[0].value
            rest = "".join(s.digits for s in run.segments[1:])
            mer = self.meridiem(run.end)
            if mer is not None and 1 <= hour <= 12 and (rest == "" or len(rest) == 2):
                minute = int(rest) if rest else 0
                if minute <= 59:
                    found.append((mer[1], Time(hour, minute, None, mer[0]), EXACT))
        found = [f for f in found if f is not None and f[1] is not None]
        return max(found, key=lambda f: f[0], default=None)

    def _year(self, j: int) -> Optional[tuple[int, int]]:
        run = self.run(j)
        if run is None or run.segments[0].zero_word:
            return None
        return run.value, run.end

    def _month(self, j: int) -> Optional[int]:
        return self.lx.months.get(self.at(j))

    def date_entity(self, i: int):
        found = []

        def build(end, day, month, year):
            try:
                found.append((end, Date(day, month, year), EXACT))
            except ValueError:
                pass

        # month first: MONTH [the] ORDINAL [YEAR] | MONTH YEAR
        month = self._month(i)
        if month is not None:
            j = i + 2 if self.at(i + 1) == "the" else i + 1
            seg = self.segment(j)
            if seg is not None and seg.ordinal:
                year = self._year(seg.end)
                build(year[1] if year else seg.end, seg.value, month, year[0] if year else None)
            elif j == i + 1:
                year = self._year(i + 1)
                if year is not None:
                    build(year[1], None, month, year[0])
        # day first: [the] DAY [of] MONTH [YEAR]
        j = i + 1 if self.at(i) == "the" else i
        seg = self.segment(j)
        if seg is not None and not seg.zero_word and (seg.ordinal or j == i):
            k = seg.end + 1 if seg.ordinal and self.at(seg.end) == "of" else seg.end
            month = self._month(k)
            if month is not None:
                year = self._year(k + 1)
                build(year[1] if year else k + 1, seg.value, month, year[0] if year else None)
        return max(found, key=lambda f: f[0], default=None)

    def matchers(self) -> list[tuple[EntityClass, Callable]]:
        return [
            (EntityClass.TIME, self.time_entity),
            (EntityClass.DATE, self.date_entity),
            (EntityClass.MEASURE, self.measure_entity),
            (EntityClass.MONEY, self.money_entity),
            (EntityClass.FRACTION, self.fraction_entity),
            (EntityClass.DECIMAL, self.decimal_entity),
            (EntityClass.ORDINAL, self.ordinal_entity),
            (EntityClass.CARDINAL, self.number_entity),
        ]

    def parse(self) -> list[ParsedEntity]:
        out = []
        i = 0
        matchers = self.matchers()
        while i < self.n:
            best = None
            for cls, matcher in matchers:
                hit = matcher(i)
                if hit is None:
                    continue
                end, value, confidence = hit
                key = (end, -_RANK[value.entity_class])
                if best is None or key > best[0]:
                    best = (key, ParsedEntity(i, end, value, confidence))
            if best is None:
                i += 1
                continue
            out.append(best[1])
            i = best[1].end
        return out


def parse_spoken(tokens: Sequence[str], locale: Optional[LocaleProfile] = None) -> list[ParsedEntity]:
    """Find spoken-form entities in a token list (tokens are lowercased here)."""
    locale = locale or bundled_locale("en")
    require_grammar(locale)
    return _Parser([t.lower() for t in tokens], locale).parse()


# Rendering


def format_integer(n: int, locale: LocaleProfile) -> str:
    sign = "-" if n < 0 else ""
    digits = str(abs(n))
    if len(digits) >= locale.min_grouping_digits:
        size = locale.group_size
        head = len(digits) % size or size
        parts = [digits[:head]] + [digits[k:k + size] for k in range(head, len(digits), size)]
        digits = locale.group_separator.join(parts)
    return sign + digits


def ordinal_suffix(n: int, locale: LocaleProfile) -> str:
    suffixes = locale.ordinal_suffixes
    if set(("st", "nd", "rd", "th")) <= set(suffixes):
        if n % 100 in (11, 12, 13):
            return "th"
        return {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")
    if not suffixes:
        return "."
    if n == 1 and "er" in suffixes:
        return "er"
    return suffixes[0]


def _render_time(t: Time, locale: LocaleProfile) -> str:
    fmt = locale.time_format
    use_24h = t.meridiem is None or locale.prefers_24h
    hour24, minute = t.to_24h()
    hour12 = t.hour if t.meridiem else hour24
    fields = {
        "h": hour24 if use_24h else hour12,
        "H": hour24,
        "mm": f"{minute:02d}",
        "ss": f"{t.second:02d}" if t.second is not None else "",
    }
    if t.second is not None:
        key = "hms"
    elif minute == 0 and (not use_24h or "hour_marker" in fmt):
        key = "h"
    else:
        key = "hm"
    text = fmt[key].format(**fields)
    if not use_24h:
        text += fmt.get("meridiem_gap", " ") + locale.meridiem_written.get(t.meridiem, t.meridiem)
    return text


def _render_date(d: Date, locale: LocaleProfile) -> str:
    if d.day is not None and d.month is not None and d.year is not None:
        parts = {"d": str(d.day), "m": str(d.month), "y": str(d.year)}
        return locale.date_separators[0].join(parts[k] for k in locale.date_order)
    parts = {}
    if d.day is not None:
        parts["d"] = str(d.day)
    if d.month is not None:
        parts["m"] = locale.months[d.month - 1]
    if d.year is not None:
        parts["y"] = str(d.year)
    if d.month is None and d.day is not None:
        parts["d"] = f"{d.day}{ordinal_suffix(d.day, locale)}"
    return " ".join(parts[k] for k in locale.date_order if k in parts)


def render_written(value: CanonicalValue, locale: Optional[LocaleProfile] = None,
                   numeric_context: bool = False) -> str:
    """Locale-formatted written form of a value.

    ``numeric_context`` marks a cardinal that sits in a ratio or comparison
    ("9 out of 10"), where style guides use digits even for small numbers.
    """
    locale = locale or bundled_locale("en")
    if isinstance(value, Cardinal):
        lo, hi = locale.small_cardinal_range
        if (locale.small_cardinal_preference == "words" and lo <= value.value <= hi
                and not numeric_context and locale.verbalization):
            return locale.words_for("unit", value.value)
        return format_integer(value.value, locale)
    if isinstance(value, Ordinal):
        return f"{value.value}{ordinal_suffix(value.value, locale)}"
    if isinstance(value, Decimal):
        sign = "-" if value.negative else ""
        return f"{sign}{format_integer(value.integer, locale)}{locale.decimal_separator}{value.fraction_digits}"
    if isinstance(value, Fraction):
        core = f"{value.numerator}/{value.denominator}"
        return core if value.whole is None else f"{value.whole} {core}"
    if isinstance(value, Money):
        info = locale.currencies.get(value.currency)
        symbol = info.symbol if info else value.currency
        amount = format_integer(value.major, locale)
        if value.minor:
            amount += locale.decimal_separator + value.minor
        return f"{symbol}{amount}" if locale.currency_position == "prefix" else f"{amount} {symbol}"
    if isinstance(value, Time):
        return _render_time(value, locale)
    if isinstance(value, Date):
        return _render_date(value, locale)
    if isinstance(value, Measure):
        mag = value.magnitude
        text = render_written(mag, locale, numeric_context=True)
        unit = locale.units[value.unit].written
        return f"{text}{unit}" if unit in ("%", "°") else f"{text} {unit}"
    if isinstance(value, Telephone):
        groups = list(value.groups)
        if len(groups) == 4:
            return f"+{groups[0]} " + "-".join(groups[1:])
        return "-".join(groups)
    if isinstance(value, DigitSequence):
        return value.digits
    raise TypeError(f"not a canonical value: {value!r}")


def _numeric_context(entities: list[ParsedEntity], k: int, words: list[str]) -> bool:
    """True when entity k is one side of an "X out of Y" comparison."""
    ent = entities[k]
    if words[ent.end:ent.end + 2] == ["out", "of"] and k + 1 < len(entities) \
            and entities[k + 1].start == ent.end + 2:
        return True
    if ent.start >= 2 and words[ent.start - 2:ent.start] == ["out", "of"] and k > 0 \
            and entities[k - 1].end == ent.start - 2:
        return True
    return False


def itn(sentence: str, locale: Optional[LocaleProfile] = None) -> str:
    """Replace every spoken-form entity in ``sentence`` by its written form."""
    locale = locale or bundled_locale("en")
    tokens = tokenize(sentence)
    words = [t.norm for t in tokens]
    entities = parse_spoken(words, locale)
    out = []
    cursor = 0
    for k, ent in enumerate(entities):
        start, end = tokens[ent.start].start, tokens[ent.end - 1].end
        out.append(sentence[cursor:start])
        out.append(render_written(ent.value, locale, _numeric_context(entities, k, words)))
        cursor = end
    out.append(sentence[cursor:])
    return "".join(out)
