"""Shared value types, the entity-class taxonomy and locale profiles."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping, Optional, Union

LOCALE_DIR = Path(__file__).parent / "locales"


class ItnKitError(Exception):
    """Base class for all toolkit errors."""


class LocaleError(ItnKitError):
    """Raised when a locale file cannot be parsed or violates an invariant."""


class EntityClass(str, Enum):
    CARDINAL = "Cardinal"
    ORDINAL = "Ordinal"
    DECIMAL = "Decimal"
    FRACTION = "Fraction"
    MONEY = "Money"
    TIME = "Time"
    DATE = "Date"
    MEASURE = "Measure"
    TELEPHONE = "Telephone"
    DIGIT_SEQUENCE = "DigitSequence"

    def __str__(self) -> str:
        return self.value


# Canonical values. Each one validates itself on construction so a value that
# exists is always well-formed.


@dataclass(frozen=True)
class Cardinal:
    value: int

    entity_class = EntityClass.CARDINAL


@dataclass(frozen=True)
class Ordinal:
    value: int

    entity_class = EntityClass.ORDINAL

    def __post_init__(self):
        if self.value < 1:
            raise ValueError(f"ordinal must be positive, got {self.value}")


@dataclass(frozen=True)
class Decimal:
    integer: int
    fraction_digits: str
    negative: bool = False

    entity_class = EntityClass.DECIMAL

    def __post_init__(self):
        if self.integer < 0:
            raise ValueError("decimal integer part is unsigned; use negative=True")
        if not self.fraction_digits.isdigit() or not self.fraction_digits.isascii():
            raise ValueError(f"bad fraction digits {self.fraction_digits!r}")

    def as_text(self) -> str:
        return ("-" if self.negative else "") + f"{self.integer}.{self.fraction_digits}"


@dataclass(frozen=True)
class Fraction:
    numerator: int
    denominator: int
    whole: Optional[int] = None

    entity_class = EntityClass.FRACTION

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("fraction denominator must be positive")
        if self.numerator < 0 or (self.whole is not None and self.whole < 0):
            raise ValueError("fraction parts must be non-negative")


@dataclass(frozen=True)
class Money:
    major: int
    minor: Optional[str]
    currency: str

    entity_class = EntityClass.MONEY

    def __post_init__(self):
        if self.major < 0:
            raise ValueError("money amount must be non-negative")
        if self.minor is not None and (not self.minor.isdigit() or not self.minor.isascii()):
            raise ValueError(f"bad minor amount {self.minor!r}")
        if not re.fullmatch(r"[A-Z]{3}", self.currency):
            raise ValueError(f"currency must be an ISO-4217 code, got {self.currency!r}")


@dataclass(frozen=True)
class Time:
    hour: int
    minute: int
    second: Optional[int] = None
    meridiem: Optional[str] = None  # "am", "pm" or None when not stated

    entity_class = EntityClass.TIME

    def __post_init__(self):
        if self.meridiem not in (None, "am", "pm"):
            raise ValueError(f"bad meridiem {self.meridiem!r}")
        if self.meridiem is None:
            if not 0 <= self.hour <= 23:
                raise ValueError(f"hour out of range: {self.hour}")
        elif not 1 <= self.hour <= 12:
            raise ValueError(f"12-hour clock hour out of range: {self.hour}")
        if not 0 <= self.minute <= 59:
            raise ValueError(f"minute out of range: {self.minute}")
        if self.second is not None and not 0 <= self.second <= 59:
            raise ValueError(f"second out of range: {self.second}")

    def to_24h(self) -> tuple[int, int]:
        if self.meridiem is None:
            return self.hour, self.minute
        hour = self.hour % 12
        if self.meridiem == "pm":
            hour += 12
        return hour, self.minute


@dataclass(frozen=True)
class Date:
    day: Optional[int] = None
    month: Optional[int] = None
    year: Optional[int] = None

    entity_class = EntityClass.DATE

    def __post_init__(self):
        if self.day is None and self.month is None and self.year is None:
            raise ValueError("date needs at least one field")
        if self.day is not None and not 1 <= self.day <= 31:
            raise ValueError(f"day out of range: {self.day}")
        if self.month is not None and not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")


@dataclass(frozen=True)
class Measure:
    magnitude: Union[Cardinal, Decimal]
    unit: str

    entity_class = EntityClass.MEASURE

    def __post_init__(self):
        if not isinstance(self.magnitude, (Cardinal, Decimal)):
            raise ValueError("measure magnitude must be Cardinal or Decimal")


@dataclass(frozen=True)
class Telephone:
    groups: tuple[str, ...]

    entity_class = EntityClass.TELEPHONE

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        if not self.groups or not all(g.isdigit() and g.isascii() for g in self.groups):
            raise ValueError(f"bad telephone groups {self.groups!r}")

    @property
    def digits(self) -> str:
        return "".join(self.groups)


@dataclass(frozen=True)
class DigitSequence:
    digits: str

    entity_class = EntityClass.DIGIT_SEQUENCE

    def __post_init__(self):
        if not self.digits.isdigit() or not self.digits.isascii():
            raise ValueError(f"bad digit sequence {self.digits!r}")


CanonicalValue = Union[
    Cardinal, Ordinal, Decimal, Fraction, Money, Time, Date, Measure, Telephone, DigitSequence
]

_VALUE_TYPES = {
    cls.entity_class.value: cls
    for cls in (Cardinal, Ordinal, Decimal, Fraction, Money, Time, Date, Measure, Telephone, DigitSequence)
}


def value_to_json(value: CanonicalValue) -> dict[str, Any]:
    """Interchange form: a JSON object with a ``class`` discriminator."""
    out: dict[str, Any] = {"class": value.entity_class.value}
    for name in value.__dataclass_fields__:
        item = getattr(value, name)
        if isinstance(item, (Cardinal, Decimal)):
            item = value_to_json(item)
        elif isinstance(item, tuple):
            item = list(item)
        out[name] = item
    return out


def value_from_json(data: Mapping[str, Any]) -> CanonicalValue:
    try:
        cls = _VALUE_TYPES[data["class"]]
    except KeyError as exc:
        raise ValueError(f"unknown value class in {data!r}") from exc
    kwargs = {k: v for k, v in data.items() if k != "class"}
    if cls is Measure:
        kwargs["magnitude"] = value_from_json(kwargs["magnitude"])
    if cls is Telephone:
        kwargs["groups"] = tuple(kwargs["groups"])
    return cls(**kwargs)


@dataclass(frozen=True)
class EntitySpan:
    cls: EntityClass
    start: int
    end: int
    surface: str
    value: CanonicalValue
    ambiguous: bool = False

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"bad span range [{self.start}, {self.end})")
        if len(self.surface) != self.end - self.start:
            raise ValueError("surface length does not match span range")

    def to_json(self) -> dict[str, Any]:
        out = {
            "class": self.cls.value,
            "start": self.start,
            "end": self.end,
            "surface": self.surface,
            "value": value_to_json(self.value),
        }
        if self.ambiguous:
            out["ambiguous"] = True
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "EntitySpan":
        return cls(
            EntityClass(data["class"]),
            data["start"],
            data["end"],
            data["surface"],
            value_from_json(data["value"]),
            data.get("ambiguous", False),
        )


@dataclass(frozen=True)
class Alignment:
    spoken_start: int
    spoken_end: int
    span: EntitySpan


PROVENANCES = ("augmented", "translated", "human")


@dataclass(frozen=True)
class SpokenWrittenPair:
    spoken: tuple[str, ...]
    written: str
    language: str
    alignments: tuple[Alignment, ...] = ()
    provenance: str = "augmented"
    id: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "spoken", tuple(self.spoken))
        object.__setattr__(self, "alignments", tuple(self.alignments))
        if self.provenance not in PROVENANCES:
            raise ValueError(f"bad provenance {self.provenance!r}")
        last = 0
        for al in sorted(self.alignments, key=lambda a: a.spoken_start):
            if not last <= al.spoken_start < al.spoken_end <= len(self.spoken):
                raise ValueError("alignment spoken range out of bounds or overlapping")
            last = al.spoken_end
            if self.written[al.span.start:al.span.end] != al.span.surface:
                raise ValueError("alignment span does not match the written text")

    @property
    def spoken_text(self) -> str:
        return " ".join(self.spoken)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        if self.id is not None:
            out["id"] = self.id
        out.update(
            spoken=self.spoken_text,
            written=self.written,
            language=self.language,
            alignments=[
                {"spoken": [a.spoken_start, a.spoken_end], "span": a.span.to_json()}
                for a in self.alignments
            ],
            provenance=self.provenance,
        )
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "SpokenWrittenPair":
        spoken = data["spoken"]
        if isinstance(spoken, str):
            spoken = spoken.split()
        alignments = tuple(
            Alignment(a["spoken"][0], a["spoken"][1], EntitySpan.from_json(a["span"]))
            for a in data.get("alignments", ())
        )
        ident = data.get("id")
        return cls(
            tuple(spoken),
            data["written"],
            data.get("language", "en"),
            alignments,
            data.get("provenance", "augmented"),
            None if ident is None else str(ident),
        )


# Locale profiles


@dataclass(frozen=True)
class NumberWord:
    value: int
    role: str
    variant: bool = False


NUMBER_ROLES = ("unit", "teen", "tens", "hundred", "hundreds", "ordinal", "denominator", "connective")


@dataclass(frozen=True)
class UnitInfo:
    id: str
    symbols: tuple[str, ...]
    singular: tuple[str, ...]
    plural: tuple[str, ...]
    written: str


@dataclass(frozen=True)
class CurrencyInfo:
    code: str
    symbol: str
    major: tuple[str, ...]  # singular, plural
    minor: tuple[str, ...]
    minor_digits: int


def _frozen_map(d: Mapping) -> Mapping:
    return MappingProxyType(dict(d))


@dataclass(frozen=True, eq=False)
class LocaleProfile:
    language: str
    decimal_separator: str
    group_separators: frozenset[str]
    group_size: int
    min_grouping_digits: int
    clock: str
    small_cardinal_preference: str
    small_cardinal_range: tuple[int, int]
    magnitude_lexicon: Mapping[str, int]
    magnitude_suffixes: Mapping[str, int]
    number_words: Mapping[str, NumberWord]
    ambiguous_number_words: frozenset[str]
    currency_lexicon: Mapping[str, str]
    currencies: Mapping[str, CurrencyInfo]
    currency_position: str
    minor_unit_digits: int
    units: Mapping[str, UnitInfo]
    months: tuple[str, ...]
    month_abbreviations: tuple[str, ...]
    date_order: str
    date_separators: tuple[str, ...]
    verbal_date_order: str
    ordinal_suffixes: tuple[str, ...]
    time_format: Mapping[str, str]
    meridiem_written: Mapping[str, str]
    verbalization: bool
    document: str = field(repr=False, default="{}")  # canonical JSON of the source

    # Structural equality over the source document.
    def __eq__(self, other):
        if not isinstance(other, LocaleProfile):
            return NotImplemented
        return self.document == other.document

    def __hash__(self):
        return hash(self.document)

    def to_dict(self) -> dict[str, Any]:
        return json.loads(self.document)

    @property
    def group_separator(self) -> str:
        """The separator used when rendering (first one listed in the profile)."""
        sep = self.__dict__.get("_group_separator")
        if sep is None:
            sep = self.to_dict()["group_separators"][0]
            object.__setattr__(self, "_group_separator", sep)
        return sep

    @property
    def prefers_24h(self) -> bool:
        return self.clock == "prefers-24h"

    def words_for(self, role: str, value: int) -> str:
        """Preferred (non-variant) word for ``value`` in ``role``."""
        return self._reverse[(role, value)]

    @property
    def _reverse(self) -> dict[tuple[str, int], str]:
        rev = self.__dict__.get("_reverse_cache")
        if rev is None:
            rev = {
                (w.role, w.value): word
                for word, w in self.number_words.items()
                if not w.variant
            }
            object.__setattr__(self, "_reverse_cache", rev)
        return rev

    def month_number(self, name: str) -> Optional[int]:
        key = name.lower().rstrip(".")
        for i, m in enumerate(self.months):
            if m.lower() == key:
                return i + 1
        for i, m in enumerate(self.month_abbreviations):
            if m.lower().rstrip(".") == key:
                return i + 1
        return None

    def unit_by_token(self) -> dict[tuple[str, ...], tuple[str, bool]]:
        """Spoken unit phrase (as token tuple) -> (unit id, is_plural)."""
        out = {}
        for unit in self.units.values():
            for form in unit.singular:
                out[tuple(form.split())] = (unit.id, False)
            for form in unit.plural:
                out[tuple(form.split())] = (unit.id, True)
        return out


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


_REQUIRED = (
    "language", "decimal_separator", "group_separators", "group_size", "clock",
    "small_cardinal", "magnitude_lexicon", "number_words", "currency_lexicon",
    "minor_unit_digits",
)


def locale_from_dict(data: Mapping[str, Any], source: str = "<dict>") -> LocaleProfile:
    def fail(msg: str) -> LocaleError:
        return LocaleError(f"{source}: {msg}")

    if not isinstance(data, Mapping):
        raise fail("top level must be a JSON object")
    for key in _REQUIRED:
        if key not in data:
            raise fail(f"missing field '{key}'")

    dec = data["decimal_separator"]
    groups = frozenset(data["group_separators"])
    if not isinstance(dec, str) or len(dec) != 1:
        raise fail("field 'decimal_separator' must be a single character")
    if any(not isinstance(g, str) or len(g) != 1 for g in groups):
        raise fail("field 'group_separators' must hold single characters")
    if dec in groups:
        raise fail("invariant violated: decimal_separator must not be a group separator")
    if not isinstance(data["group_size"], int) or data["group_size"] < 1:
        raise fail("field 'group_size' must be a positive integer")
    if data["clock"] not in ("prefers-12h", "prefers-24h"):
        raise fail("field 'clock' must be 'prefers-12h' or 'prefers-24h'")

    small = data["small_cardinal"]
    if small.get("preference") not in ("words", "digits"):
        raise fail("field 'small_cardinal.preference' must be 'words' or 'digits'")
    lo, hi = small.get("range", [1, 9])
    if not 0 <= lo <= hi:
        raise fail("field 'small_cardinal.range' is not an interval")

    number_words: dict[str, NumberWord] = {}
    preferred: dict[tuple[str, int], str] = {}
    for word, entry in data["number_words"].items():
        if isinstance(entry, int):
            entry = {"value": entry, "role": "unit"}
        role = entry.get("role")
        if role not in NUMBER_ROLES:
            raise fail(f"number word '{word}' has unknown role {role!r}")
        nw = NumberWord(int(entry["value"]), role, bool(entry.get("variant", False)))
        if not nw.variant and role != "connective":
            key = (role, nw.value)
            if key in preferred:
                raise fail(
                    f"invariant violated: number_words ambiguous for role {role} value "
                    f"{nw.value} ('{preferred[key]}' and '{word}')"
                )
            preferred[key] = word
        number_words[word.lower()] = nw

    for name in ("magnitude_lexicon", "number_words", "currency_lexicon"):
        if not data[name]:
            raise fail(f"lexicon '{name}' is empty")

    currencies = {}
    for code, c in data.get("currencies", {}).items():
        currencies[code] = CurrencyInfo(
            code,
            c["symbol"],
            tuple(c.get("major", ())),
            tuple(c.get("minor", ())),
            int(c.get("minor_digits", data["minor_unit_digits"])),
        )
    for word, code in data["currency_lexicon"].items():
        if code not in currencies:
            raise fail(f"currency_lexicon maps '{word}' to undeclared currency {code}")

    units = {}
    for uid, u in data.get("units", {}).items():
        units[uid] = UnitInfo(
            uid,
            tuple(u.get("symbols", ())),
            tuple(u.get("singular", ())),
            tuple(u.get("plural", ())),
            u.get("written", (u.get("symbols") or [uid])[0]),
        )

    months = tuple(data.get("months", ()))
    if months and len(months) != 12:
        raise fail("field 'months' must list twelve names")
    abbrevs = tuple(data.get("month_abbreviations", ()))
    order = data.get("date_order", "dmy")
    verbal_order = data.get("verbal_date_order", order)
    for name, o in (("date_order", order), ("verbal_date_order", verbal_order)):
        if sorted(o) != ["d", "m", "y"]:
            raise fail(f"field '{name}' must be a permutation of 'dmy'")

    return LocaleProfile(
        language=data["language"],
        decimal_separator=dec,
        group_separators=groups,
        group_size=data["group_size"],
        min_grouping_digits=int(data.get("min_grouping_digits", data["group_size"] + 1)),
        clock=data["clock"],
        small_cardinal_preference=small["preference"],
        small_cardinal_range=(int(lo), int(hi)),
        magnitude_lexicon=_frozen_map({k.lower(): int(v) for k, v in data["magnitude_lexicon"].items()}),
        magnitude_suffixes=_frozen_map(data.get("magnitude_suffixes", {})),
        number_words=_frozen_map(number_words),
        ambiguous_number_words=frozenset(w.lower() for w in data.get("ambiguous_number_words", ())),
        currency_lexicon=_frozen_map(data["currency_lexicon"]),
        currencies=_frozen_map(currencies),
        currency_position=data.get("currency_position", "prefix"),
        minor_unit_digits=int(data["minor_unit_digits"]),
        units=_frozen_map(units),
        months=months,
        month_abbreviations=abbrevs,
        date_order=order,
        date_separators=tuple(data.get("date_separators", ["/"])),
        verbal_date_order=verbal_order,
        ordinal_suffixes=tuple(data.get("ordinal_suffixes", ())),
        time_format=_frozen_map(data.get("time_format", {})),
        meridiem_written=_frozen_map(data.get("meridiem_written", {"am": "am", "pm": "pm"})),
        verbalization=bool(data.get("verbalization", False)),
        document=_canonical_json(data),
    )


def load_locale(path: Union[str, Path]) -> LocaleProfile:
    """Load and validate a locale profile.

    ``path`` may be a file path or the bare tag of a bundled locale
    (``"en"``, ``"fr"``, ...).
    """
    p = Path(path)
    if not p.exists() and (LOCALE_DIR / f"{path}.json").exists():
        p = LOCALE_DIR / f"{path}.json"
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise LocaleError(f"{p}: cannot read locale file ({exc})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LocaleError(f"{p}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    try:
        return locale_from_dict(data, str(p))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, LocaleError):
            raise
        raise LocaleError(f"{p}: malformed field ({exc!r})") from exc


_cache: dict[str, LocaleProfile] = {}


def bundled_locale(tag: str) -> LocaleProfile:
    if tag not in _cache:
        _cache[tag] = load_locale(LOCALE_DIR / f"{tag}.json")
    return _cache[tag]


@dataclass(frozen=True)
class AugmentationConfig:
    locale: LocaleProfile
    max_variants_per_entity: Optional[int] = 16  # None means unlimited
    max_pairs_per_sentence: int = 8
    seed: int = 0
    enabled_classes: frozenset[EntityClass] = frozenset(EntityClass)

    def __post_init__(self):
        if self.max_variants_per_entity is not None and self.max_variants_per_entity < 1:
            raise ValueError("max_variants_per_entity must be positive")
        if self.max_pairs_per_sentence < 1:
            raise ValueError("max_pairs_per_sentence must be positive")
        object.__setattr__(self, "enabled_classes", frozenset(self.enabled_classes))
        object.__setattr__(self, "seed", self.seed & 0xFFFFFFFFFFFFFFFF)
