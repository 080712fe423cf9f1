"""Canonical verbal forms.

Every value has exactly one canonical verbalization: the anchor from which
the spoken-variant generator works.  Numbers use the full long form without
"and"; decimals read their fraction digits one by one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .domain import (
    Cardinal,
    CanonicalValue,
    Date,
    Decimal,
    DigitSequence,
    EntitySpan,
    Fraction,
    ItnKitError,
    LocaleProfile,
    Measure,
    Money,
    Ordinal,
    Telephone,
    Time,
    bundled_locale,
)
from .segmenter import canonicalize as _canonicalize

MAX_NUMBER = 10**15

MERIDIEM_SPELLED = {"am": ("a", "m"), "pm": ("p", "m")}


class UnsupportedLocaleError(ItnKitError):
    pass


@dataclass(frozen=True)
class VerbalizedEntity:
    value: CanonicalValue
    canonical_verbal: tuple[str, ...]

    @property
    def text(self) -> str:
        return " ".join(self.canonical_verbal)


def require_grammar(locale: LocaleProfile) -> None:
    if not locale.verbalization:
        raise UnsupportedLocaleError(
            f"no verbalization grammar for locale '{locale.language}'"
        )


def _magnitudes(locale: LocaleProfile) -> list[tuple[int, str]]:
    return sorted(((p, w) for w, p in locale.magnitude_lexicon.items()), reverse=True)


def below_hundred(n: int, locale: LocaleProfile) -> list[str]:
    if n < 10:
        return [locale.words_for("unit", n)]
    if n < 20:
        return [locale.words_for("teen", n)]
    tens, unit = divmod(n, 10)
    out = [locale.words_for("tens", tens * 10)]
    if unit:
        out.append(locale.words_for("unit", unit))
    return out


def below_thousand(n: int, locale: LocaleProfile, with_and: bool = False) -> list[str]:
    hundreds, rest = divmod(n, 100)
    out = []
    if hundreds:
        out += [locale.words_for("unit", hundreds), locale.words_for("hundred", 100)]
        if rest and with_and:
            out.append("and")
    if rest or not hundreds:
        out += below_hundred(rest, locale)
    return out


def cardinal_words(n: int, locale: LocaleProfile, with_and: bool = False) -> list[str]:
    """Long form of ``n``; ``with_and`` inserts "and" before the final sub-hundred part."""
    if n < 0:
        return ["minus"] + cardinal_words(-n, locale, with_and)
    if n >= MAX_NUMBER:
        raise ValueError(f"{n} is too large to verbalize")
    if n < 1000:
        return below_thousand(n, locale, with_and)
    out: list[str] = []
    rest = n
    for power, word in _magnitudes(locale):
        group, rest = divmod(rest, 10**power)
        if group:
            out += below_thousand(group, locale) + [word]
    if rest:
        if with_and and rest < 100:
            out.append("and")
        out += below_thousand(rest, locale, with_and)
    return out


def has_and_form(n: int) -> bool:
    n = abs(n)
    return n >= 100 and n % 100 != 0


def ordinal_words(n: int, locale: LocaleProfile, with_and: bool = False) -> list[str]:
    words = cardinal_words(n, locale, with_and)
    last = words[-1]
    if last in locale.magnitude_lexicon:
        value = 10 ** locale.magnitude_lexicon[last]
    else:
        value = locale.number_words[last].value
    words[-1] = locale.words_for("ordinal", value)
    return words


def digit_words(digits: str, locale: LocaleProfile, zero: Optional[str] = None) -> list[str]:
    out = []
    for ch in digits:
        if ch == "0" and zero is not None:
            out.append(zero)
        else:
            out.append(locale.words_for("unit", int(ch)))
    return out


def plural_ordinal(words: list[str]) -> list[str]:
    last = words[-1]
    if last == "half":
        return words[:-1] + ["halves"]
    return words[:-1] + [last + "s"]


def denominator_words(den: int, plural: bool, locale: LocaleProfile, style: str = "canonical") -> list[str]:
    if den == 2 and style != "ordinal":
        base = ["half"]
    elif den == 4 and style == "canonical":
        base = ["quarter"]
    else:
        base = ordinal_words(den, locale)
    return plural_ordinal(base) if plural else base


def year_words(year: int, locale: LocaleProfile) -> list[str]:
    """Conventional reading of a calendar year ("twenty twenty two")."""
    if not 1000 <= year <= 9999:
        return cardinal_words(year, locale)
    high, low = divmod(year, 100)
    if low == 0 or 2000 <= year <= 2009:
        return cardinal_words(year, locale)
    if low < 10:
        return below_hundred(high, locale) + ["oh", locale.words_for("unit", low)]
    return below_hundred(high, locale) + below_hundred(low, locale)


def decimal_words(value: Decimal, locale: LocaleProfile) -> list[str]:
    out = ["minus"] if value.negative else []
    return out + cardinal_words(value.integer, locale) + ["point"] + digit_words(value.fraction_digits, locale)


def magnitude_words(mag, locale: LocaleProfile) -> list[str]:
    if isinstance(mag, Decimal):
        return decimal_words(mag, locale)
    return cardinal_words(mag.value, locale)


def is_singular(mag) -> bool:
    return isinstance(mag, Cardinal) and abs(mag.value) == 1


def unit_form(unit_id: str, plural: bool, locale: LocaleProfile, index: int = 0) -> list[str]:
    unit = locale.units[unit_id]
    forms = unit.plural if plural else unit.singular
    return forms[index].split()


def currency_words(code: str, plural: bool, locale: LocaleProfile, minor: bool = False) -> list[str]:
    info = locale.currencies[code]
    forms = info.minor if minor else info.major
    return [forms[1 if plural and len(forms) > 1 else 0]]


def time_words(t: Time, locale: LocaleProfile) -> list[str]:
    hour = cardinal_words(t.hour, locale)
    if t.meridiem is not None and t.second is None:
        out = list(hour)
        if t.minute:
            if t.minute < 10:
                out += ["oh", locale.words_for("unit", t.minute)]
            else:
                out += cardinal_words(t.minute, locale)
        return out + list(MERIDIEM_SPELLED[t.meridiem])
    out = hour + ["hour" if t.hour == 1 else "hours"]
    if t.minute or t.second is not None:
        out += cardinal_words(t.minute, locale) + ["minute" if t.minute == 1 else "minutes"]
    if t.second is not None:
        out += cardinal_words(t.second, locale) + ["second" if t.second == 1 else "seconds"]
    if t.meridiem is not None:
        out += list(MERIDIEM_SPELLED[t.meridiem])
    return out


def date_words(d: Date, locale: LocaleProfile, day_style: str = "cardinal") -> list[str]:
    parts = {}
    if d.day is not None:
        parts["d"] = (ordinal_words if day_style == "ordinal" else cardinal_words)(d.day, locale)
    if d.month is not None:
        parts["m"] = [locale.months[d.month - 1]]
    if d.year is not None:
        parts["y"] = year_words(d.year, locale)
    out: list[str] = []
    for key in locale.verbal_date_order:
        out += parts.get(key, [])
    return out


def money_words(m: Money, locale: LocaleProfile) -> list[str]:
    minor = int(m.minor) if m.minor else 0
    if m.major == 0 and minor:
        return cardinal_words(minor, locale) + currency_words(m.currency, minor != 1, locale, minor=True)
    out = cardinal_words(m.major, locale) + currency_words(m.currency, m.major != 1, locale)
    if minor:
        out += ["and"] + cardinal_words(minor, locale) + currency_words(m.currency, minor != 1, locale, minor=True)
    return out


def fraction_words(f: Fraction, locale: LocaleProfile) -> list[str]:
    out = []
    if f.whole is not None:
        out = cardinal_words(f.whole, locale) + ["and"]
    if f.denominator == 1:
        return out + cardinal_words(f.numerator, locale) + ["over", locale.words_for("unit", 1)]
    return out + cardinal_words(f.numerator, locale) + denominator_words(
        f.denominator, f.numerator != 1, locale
    )


def verbal_tokens(value: CanonicalValue, locale: LocaleProfile) -> list[str]:
    if isinstance(value, Cardinal):
        return cardinal_words(value.value, locale)
    if isinstance(value, Ordinal):
        return ordinal_words(value.value, locale)
    if isinstance(value, Decimal):
        return decimal_words(value, locale)
    if isinstance(value, Fraction):
        return fraction_words(value, locale)
    if isinstance(value, Money):
        return money_words(value, locale)
    if isinstance(value, Time):
        return time_words(value, locale)
    if isinstance(value, Date):
        return date_words(value, locale)
    if isinstance(value, Measure):
        return magnitude_words(value.magnitude, locale) + unit_form(
            value.unit, not is_singular(value.magnitude), locale
        )
    if isinstance(value, Telephone):
        return digit_words(value.digits, locale)
    if isinstance(value, DigitSequence):
        return digit_words(value.digits, locale)
    raise TypeError(f"not a canonical value: {value!r}")


def verbalize(value: CanonicalValue, locale: Optional[LocaleProfile] = None) -> VerbalizedEntity:
    locale = locale or bundled_locale("en")
    require_grammar(locale)
    return VerbalizedEntity(value, tuple(verbal_tokens(value, locale)))


def canonicalize(span: EntitySpan, locale: Optional[LocaleProfile] = None) -> CanonicalValue:
    return _canonicalize(span, locale)
