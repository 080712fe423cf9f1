"""Entity detection over written text.

Detectors are declarative pattern tables (``patterns/<locale>/<class>.json``,
falling back to ``patterns/common``).  Each pattern is a regular expression
whose placeholders (``{NUM}``, ``{UNIT}``, ...) are filled in from the locale
profile; its named groups are bound to the fields the class builder reads.

Classes are matched in a fixed precedence order.  Characters claimed by an
earlier class are masked out before later classes run.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Optional

from .domain import (
    Cardinal,
    Date,
    Decimal,
    DigitSequence,
    EntityClass,
    EntitySpan,
    Fraction,
    LocaleProfile,
    Measure,
    Money,
    Ordinal,
    Telephone,
    Time,
    bundled_locale,
)

PATTERN_DIR = Path(__file__).parent / "patterns"

PRECEDENCE = (
    EntityClass.TIME,
    EntityClass.DATE,
    EntityClass.MEASURE,
    EntityClass.MONEY,
    EntityClass.FRACTION,
    EntityClass.DECIMAL,
    EntityClass.ORDINAL,
    EntityClass.TELEPHONE,
    EntityClass.DIGIT_SEQUENCE,
    EntityClass.CARDINAL,
)

_MASK = "\x00"


class PatternError(ValueError):
    pass


class MalformedSpanError(ValueError):
    """The span surface no longer matches any pattern of its class."""


@dataclass(frozen=True)
class SegmentationResult:
    sentence: str
    spans: tuple[EntitySpan, ...]


@dataclass(frozen=True)
class CompiledPattern:
    name: str
    regex: re.Pattern
    bindings: tuple[tuple[str, str], ...]  # (field, group)

    def fields(self, m: re.Match) -> dict[str, str]:
        return {f: m.group(g) for f, g in self.bindings if m.group(g) is not None}


def _alternation(items: Iterable[str]) -> str:
    uniq = sorted({i for i in items if i}, key=lambda s: (-len(s), s))
    if not uniq:
        return "(?!x)x"
    return "(?:" + "|".join(re.escape(i) for i in uniq) + ")"


def _placeholders(locale: LocaleProfile) -> dict[str, str]:
    groups = "".join(sorted(locale.group_separators))
    group_cls = "[" + re.escape(groups) + "]"
    unit_forms = []
    for u in locale.units.values():
        unit_forms.extend(u.symbols)
        unit_forms.extend(u.singular)
        unit_forms.extend(u.plural)
    month_forms = []
    for m in locale.months + locale.month_abbreviations:
        month_forms.extend({m, m.capitalize(), m.lower(), m.rstrip(".")})
    cur_symbols = [c.symbol for c in locale.currencies.values()]
    cur_symbols += [w for w in locale.currency_lexicon if not w.isalpha()]
    cur_words = [w for w in locale.currency_lexicon if w.isalpha()]
    return {
        "NUM": rf"(?:\d{{1,{locale.group_size}}}(?:{group_cls}\d{{{locale.group_size}}})+|\d+)",
        "D": re.escape(locale.decimal_separator),
        "UNIT": _alternation(unit_forms),
        "CURSYM": _alternation(cur_symbols),
        "CURWORD": _alternation(cur_words),
        "MAGSUF": _alternation(locale.magnitude_suffixes),
        "MAGWORD": _alternation(w for m in locale.magnitude_lexicon for w in (m, m.capitalize())),
        "GSEP": group_cls,
        "MONTH": _alternation(month_forms),
        "ORDSUF": _alternation(locale.ordinal_suffixes),
        "DSEP": "[" + re.escape("".join(locale.date_separators)) + "]",
    }


def _expand(template: str, values: dict[str, str]) -> str:
    def sub(m: re.Match) -> str:
        key = m.group(1)
        if key not in values:
            return m.group(0)
        return values[key]

    # Only ALLCAPS names are placeholders, so regex quantifiers like {1,2} survive.
    return re.sub(r"\{([A-Z]+)\}", sub, template)


def _pattern_file(cls: EntityClass, language: str) -> Path:
    specific = PATTERN_DIR / language / f"{cls.value.lower()}.json"
    if specific.exists():
        return specific
    return PATTERN_DIR / "common" / f"{cls.value.lower()}.json"


def load_pattern_table(path: Path, locale: LocaleProfile) -> list[CompiledPattern]:
    data = json.loads(path.read_text(encoding="utf-8"))
    values = _placeholders(locale)
    out = []
    for entry in data["patterns"]:
        source = _expand(entry["regex"], values)
        try:
            regex = re.compile(source)
        except re.error as exc:
            raise PatternError(f"{path}: pattern {entry['name']!r}: {exc}") from exc
        bindings = tuple(sorted(entry.get("bindings", {}).items()))
        for _, group in bindings:
            if group not in regex.groupindex:
                raise PatternError(f"{path}: pattern {entry['name']!r} has no group {group!r}")
        out.append(CompiledPattern(entry["name"], regex, bindings))
    return out


# Builders: field dict -> CanonicalValue, or None when the match is not a
# valid instance of the class (e.g. minute 75).


def _int(text: str, locale: LocaleProfile) -> int:
    for sep in locale.group_separators:
        text = text.replace(sep, "")
    return int(text)


def _scale(f: dict[str, str], locale: LocaleProfile) -> int:
    if "mag" in f:
        return locale.magnitude_suffixes[f["mag"]]
    if "magword" in f:
        return locale.magnitude_lexicon[f["magword"].lower()]
    return 0


def _number(f: dict[str, str], locale: LocaleProfile):
    """Cardinal or Decimal from int/frac/neg/mag fields, magnitudes expanded."""
    integer = _int(f["int"], locale)
    frac = f.get("frac")
    neg = "neg" in f
    power = _scale(f, locale)
    if power:
        digits = (frac or "").ljust(power, "0")
        integer = integer * 10**power + int(digits[:power] or 0)
        frac = digits[power:].rstrip("0") or None
    if frac is None:
        return Cardinal(-integer if neg else integer)
    return Decimal(integer, frac, neg)


def _build_cardinal(f, locale):
    return _number(f, locale)


def _build_decimal(f, locale):
    return _number(f, locale)


def _build_measure(f, locale):
    unit_text = f["unit"]
    for unit in locale.units.values():
        if unit_text in unit.symbols or unit_text in unit.singular or unit_text in unit.plural:
            return Measure(_number(f, locale), unit.id)
    return None


def _build_money(f, locale):
    cur_text = f["cur"]
    code = locale.currency_lexicon.get(cur_text) or locale.currency_lexicon.get(cur_text.lower())
    if code is None:
        code = next((c.code for c in locale.currencies.values() if c.symbol == cur_text), None)
    if code is None:
        return None
    digits = locale.currencies[code].minor_digits
    major = _int(f["int"], locale)
    minor = f.get("frac")
    power = _scale(f, locale)
    if power:
        spill = (minor or "").ljust(power, "0")
        major = major * 10**power + int(spill[:power] or 0)
        minor = spill[power:].rstrip("0") or None
    if minor is not None:
        if len(minor) > digits:
            return None
        minor = minor.ljust(digits, "0")
    return Money(major, minor, code)


def _meridiem(text: Optional[str]) -> Optional[str]:
    if text is None:
        return None
    return "am" if text[0] in "aA" else "pm"


def _build_time(f, locale):
    hour = int(f["hour"])
    minute = int(f.get("minute", 0))
    second = int(f["second"]) if "second" in f else None
    meridiem = _meridiem(f.get("meridiem"))
    if meridiem is None and "minute" not in f and not locale.time_format.get("hour_marker"):
        return None
    try:
        return Time(hour, minute, second, meridiem)
    except ValueError:
        return None


def _valid_day(day: int, month: int) -> bool:
    limits = (31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)
    return 1 <= month <= 12 and 1 <= day <= limits[month - 1]


def _build_date(f, locale):
    year = int(f["year"]) if "year" in f else None
    if "first" in f:
        a, b = int(f["first"]), int(f["second"])
        numeric = [c for c in locale.date_order if c != "y"]
        day, month = (a, b) if numeric[0] == "d" else (b, a)
        if not _valid_day(day, month):
            # 31-12-2022 under a month-first locale: only one reading is valid
            day, month = month, day
            if not _valid_day(day, month):
                return None
            return Date(day, month, year), False
        return Date(day, month, year), (a != b and _valid_day(month, day))
    if "monthname" in f:
        month = locale.month_number(f["monthname"])
    else:
        month = int(f["month"]) if "month" in f else None
    if month is None:
        return None
    day = int(f["day"]) if "day" in f else None
    if day is not None and not _valid_day(day, month):
        return None
    return Date(day, month, year)


def _build_fraction(f, locale):
    den = int(f["den"])
    if den == 0:
        return None
    whole = int(f["whole"]) if "whole" in f else None
    return Fraction(int(f["num"]), den, whole)


_EN_SUFFIX = {1: "st", 2: "nd", 3: "rd"}


def _build_ordinal(f, locale):
    value = int(f["int"])
    if value < 1:
        return None
    if locale.language == "en":
        expected = "th" if value % 100 in (11, 12, 13) else _EN_SUFFIX.get(value % 10, "th")
        if f["suffix"].lower() != expected:
            return None
    return Ordinal(value)


def _build_telephone(f, locale):
    groups = []
    if "cc" in f:
        groups.append(f["cc"].lstrip("+"))
    area = f.get("area") or f.get("parea")
    if area:
        groups.append(area)
    groups += [f["exchange"], f["line"]]
    return Telephone(tuple(groups))


def _build_digits(f, locale):
    return DigitSequence(f["digits"])


BUILDERS: dict[EntityClass, Callable] = {
    EntityClass.CARDINAL: _build_cardinal,
    EntityClass.DECIMAL: _build_decimal,
    EntityClass.MEASURE: _build_measure,
    EntityClass.MONEY: _build_money,
    EntityClass.TIME: _build_time,
    EntityClass.DATE: _build_date,
    EntityClass.FRACTION: _build_fraction,
    EntityClass.ORDINAL: _build_ordinal,
    EntityClass.TELEPHONE: _build_telephone,
    EntityClass.DIGIT_SEQUENCE: _build_digits,
}


def _build(cls: EntityClass, fields: dict[str, str], locale: LocaleProfile):
    """Returns (value, ambiguous) or None."""
    try:
        result = BUILDERS[cls](fields, locale)
    except (ValueError, KeyError):
        return None
    if result is None:
        return None
    if isinstance(result, tuple):
        return result
    return result, False


class Segmenter:
    """Compiled pattern tables for one locale; immutable and reentrant."""

    def __init__(self, locale: LocaleProfile, enabled: Optional[Iterable[EntityClass]] = None):
        self.locale = locale
        self.enabled = frozenset(EntityClass if enabled is None else enabled)
        self.tables = {
            cls: tuple(load_pattern_table(_pattern_file(cls, locale.language), locale))
            for cls in PRECEDENCE
        }

    def segment(self, sentence: str) -> SegmentationResult:
        work = sentence
        spans: list[EntitySpan] = []
        for cls in PRECEDENCE:
            if cls not in self.enabled:
                continue
            candidates = []
            for pattern in self.tables[cls]:
                for m in pattern.regex.finditer(work):
                    if m.end() <= m.start():
                        continue
                    built = _build(cls, pattern.fields(m), self.locale)
                    if built is None:
                        continue
                    candidates.append((m.start(), -(m.end() - m.start()), m.end(), built))
            candidates.sort(key=lambda c: (c[0], c[1]))
            taken_until = -1
            for start, _, end, (value, ambiguous) in candidates:
                if start < taken_until or _MASK in work[start:end]:
                    continue
                span_cls = value.entity_class
                if span_cls not in self.enabled:
                    continue
                spans.append(EntitySpan(span_cls, start, end, sentence[start:end], value, ambiguous))
                taken_until = end
            for s in spans:
                if _MASK not in work[s.start:s.end]:
                    work = work[:s.start] + _MASK * (s.end - s.start) + work[s.end:]
        spans.sort(key=lambda s: s.start)
        return SegmentationResult(sentence, tuple(spans))

    def pick(self, sentence: str) -> bool:
        if not any(ch.isdigit() for ch in sentence):
            return False
        return bool(self.segment(sentence).spans)

    def canonicalize(self, span: EntitySpan):
        for cls in (span.cls, *PRECEDENCE):
            for pattern in self.tables[cls]:
                m = pattern.regex.fullmatch(span.surface)
                if m is None:
                    continue
                built = _build(cls, pattern.fields(m), self.locale)
                if built is not None and built[0].entity_class is span.cls:
                    return built[0]
        raise MalformedSpanError(f"{span.surface!r} does not match any {span.cls} pattern")


@lru_cache(maxsize=32)
def _segmenter_for(locale: LocaleProfile, enabled: frozenset) -> Segmenter:
    return Segmenter(locale, enabled)


def get_segmenter(locale: LocaleProfile, enabled: Optional[Iterable[EntityClass]] = None) -> Segmenter:
    return _segmenter_for(locale, frozenset(EntityClass if enabled is None else enabled))


def segment(sentence: str, locale: Optional[LocaleProfile] = None,
            enabled: Optional[Iterable[EntityClass]] = None) -> SegmentationResult:
    return get_segmenter(locale or bundled_locale("en"), enabled).segment(sentence)


def pick(sentence: str, locale: Optional[LocaleProfile] = None,
         enabled: Optional[Iterable[EntityClass]] = None) -> bool:
    return get_segmenter(locale or bundled_locale("en"), enabled).pick(sentence)


def canonicalize(span: EntitySpan, locale: Optional[LocaleProfile] = None):
    return get_segmenter(locale or bundled_locale("en")).canonicalize(span)
