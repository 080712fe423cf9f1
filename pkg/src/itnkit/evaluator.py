"""Normalized ITN accuracy with locale-aware entity equivalence.

Written entities are reduced to canonical digit strings (separators
stripped, "." as decimal point, magnitude words expanded) so that "25 000,00"
in French and "25,000.00" in English compare equal.  Spoken number words left
in a written text are extracted too, flagged as word forms, so that a
prediction which keeps "neuf" where "9" was expected is scored as wrong
rather than silently ignored.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction as Rational
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .domain import (
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
    SpokenWrittenPair,
    Telephone,
    Time,
    bundled_locale,
)
from .pipeline import (
    MisalignedStreamError,
    _reader,
    entity_regions,
    lexicon_runs,
    mask_written,
)
from .segmenter import PRECEDENCE, get_segmenter


@dataclass(frozen=True)
class NormalizedEntity:
    cls: EntityClass
    digits: str
    clock24: Optional[frozenset[str]] = None  # possible 24h readings of a Time
    magnitude: Optional[str] = None  # expanded value when a magnitude word was used
    detail: tuple = ()  # class-specific parts not carried by the digits
    word_form: bool = False  # spelled out rather than written with digits
    surface: str = ""

    @property
    def family(self) -> str:
        return _family(self.cls)


def _family(cls: EntityClass) -> str:
    # Bare numbers may be read as either class depending on length.
    if cls in (EntityClass.CARDINAL, EntityClass.DIGIT_SEQUENCE):
        return "number"
    return cls.value


def _number_digits(value) -> tuple[str, tuple]:
    if isinstance(value, Decimal):
        return f"{value.integer}.{value.fraction_digits}", (value.negative,)
    return str(abs(value.value)), (value.value < 0,)


def _clock_readings(t: Time, locale: LocaleProfile) -> frozenset[str]:
    suffix = f":{t.minute:02d}" + (f":{t.second:02d}" if t.second is not None else "")
    if t.meridiem is not None:
        return frozenset({f"{t.to_24h()[0]:02d}{suffix}"})
    hours = {t.hour % 24}
    # Without a meridiem a 12-hour locale leaves the half of the day open.
    if not locale.prefers_24h and 1 <= t.hour <= 11:
        hours.add(t.hour + 12)
    return frozenset(f"{h:02d}{suffix}" for h in hours)


def normalize_value(value, locale: LocaleProfile, surface: str = "") -> NormalizedEntity:
    """Canonical digit form of a parsed written value."""
    cls = value.entity_class
    clock = magnitude = None
    detail: tuple = ()
    if isinstance(value, (Cardinal, Decimal)):
        digits, detail = _number_digits(value)
        if any(w.lower() in locale.magnitude_lexicon for w in surface.split()) or (
                surface and surface[-1:].isalpha()):
            magnitude = digits
    elif isinstance(value, Ordinal):
        digits = str(value.value)
    elif isinstance(value, Money):
        digits = str(value.major) + (f".{value.minor}" if value.minor else "")
        detail = (value.currency,)
    elif isinstance(value, Measure):
        digits, detail = _number_digits(value.magnitude)
        detail = detail + (value.unit,)
    elif isinstance(value, Fraction):
        digits = f"{value.whole or ''}{value.numerator}{value.denominator}"
        detail = (value.whole, value.numerator, value.denominator)
    elif isinstance(value, Time):
        second = f"{value.second:02d}" if value.second is not None else ""
        digits = f"{value.hour}{value.minute:02d}{second}"
        clock = _clock_readings(value, locale)
    elif isinstance(value, Date):
        digits = "".join(
            f"{part:0{width}d}" for part, width in ((value.year, 4), (value.month, 2), (value.day, 2))
            if part is not None)
        detail = (value.year, value.month, value.day)
    elif isinstance(value, Telephone):
        digits = value.digits
    elif isinstance(value, DigitSequence):
        digits = value.digits
    else:  # pragma: no cover - exhaustive over CanonicalValue
        raise TypeError(f"unsupported value {value!r}")
    return NormalizedEntity(cls, digits, clock, magnitude, detail, False, surface)


_STRUCTURAL = ("hundred", "magnitude", "connective")


def extract_normalized_entities(written: str, locale: LocaleProfile) -> list[NormalizedEntity]:
    """Digit-bearing entities of ``written`` plus any spelled-out numbers, in text order."""
    spans = get_segmenter(locale).segment(written).spans
    found: list[tuple[int, NormalizedEntity]] = [
        (s.start, normalize_value(s.value, locale, s.surface)) for s in spans
    ]
    # Spelled-out numbers outside the spans, found on a copy with spans blanked.
    blanked = list(written)
    for s in spans:
        blanked[s.start:s.end] = " " * (s.end - s.start)
    text = "".join(blanked)
    offsets, tokens, pos = [], [], 0
    for tok in text.split():
        pos = text.index(tok, pos)
        offsets.append(pos)
        tokens.append(tok)
        pos += len(tok)
    reader = _reader(locale)
    for run in lexicon_runs(tokens, locale):
        roles = {role for w in run.words for _, role in (reader.resolve(w) or ())}
        if roles <= set(_STRUCTURAL):
            continue  # a bare "thousand"/"million" is not a number by itself
        cls = EntityClass.ORDINAL if "ordinal" in roles else EntityClass.CARDINAL
        surface = " ".join(tokens[run.start:run.end])
        found.append((offsets[run.start], NormalizedEntity(
            cls, run.digits.lstrip("0") or "0", word_form=True, surface=surface)))
    found.sort(key=lambda item: item[0])
    return [e for _, e in found]


def _small(value: str, locale: LocaleProfile) -> bool:
    lo, hi = locale.small_cardinal_range
    return value.isdigit() and lo <= int(value) <= hi


def entities_equivalent(source: NormalizedEntity, target: NormalizedEntity,
                        locale: LocaleProfile) -> bool:
    """Whether ``target`` (in ``locale``) renders the same entity as ``source``.

    Rules apply in order: 12/24-hour clock mapping for times, magnitude
    expansion, small-cardinal word/digit identification (directional: the
    source may be a word, the target must follow its locale's policy), then
    separator-normalized digit equality.
    """
    if source.family != target.family:
        return False
    # (1) clock mapping
    if source.cls is EntityClass.TIME and target.cls is EntityClass.TIME:
        if source.clock24 is not None and target.clock24 is not None:
            return bool(source.clock24 & target.clock24)
    # (2) magnitudes are expanded at extraction time, so "24 mille" is 24000
    src_digits = source.magnitude or source.digits
    tgt_digits = target.magnitude or target.digits
    # (3) small cardinals
    if target.word_form:
        if locale.small_cardinal_preference != "words" or not _small(tgt_digits, locale):
            return False
    if source.word_form and not target.word_form and not _small(src_digits, locale):
        return False
    # (4) separators are normalized away in the digit strings
    if src_digits != tgt_digits:
        return False
    if source.word_form or target.word_form:
        return True
    return source.detail == target.detail


# Reports


def _ratio(r: Optional[Rational]) -> Optional[str]:
    return None if r is None else f"{r.numerator}/{r.denominator}"


@dataclass
class EvalReport:
    per_class: dict[EntityClass, list[int]] = field(default_factory=dict)  # cls -> [correct, total]
    translation_accuracy: Optional[Rational] = None
    non_itn_accuracy: Optional[Rational] = None
    skipped_already_written: int = 0
    unmatched_predictions: int = 0

    def add(self, cls: EntityClass, correct: bool) -> None:
        bucket = self.per_class.setdefault(cls, [0, 0])
        bucket[0] += int(correct)
        bucket[1] += 1

    @property
    def correct(self) -> int:
        return sum(c for c, _ in self.per_class.values())

    @property
    def total(self) -> int:
        return sum(t for _, t in self.per_class.values())

    @property
    def overall_accuracy(self) -> Optional[Rational]:
        return Rational(self.correct, self.total) if self.total else None

    def merge(self, other: "EvalReport") -> "EvalReport":
        out = EvalReport(skipped_already_written=self.skipped_already_written + other.skipped_already_written,
                         unmatched_predictions=self.unmatched_predictions + other.unmatched_predictions)
        for report in (self, other):
            for cls, (c, t) in report.per_class.items():
                bucket = out.per_class.setdefault(cls, [0, 0])
                bucket[0] += c
                bucket[1] += t
        return out

    def to_json(self) -> dict:
        def num(r):
            return None if r is None else float(r)

        return {
            "per_class": {
                cls.value: {"correct": c, "total": t}
                for cls, (c, t) in sorted(self.per_class.items(), key=lambda kv: kv[0].value)
            },
            "overall_accuracy": _ratio(self.overall_accuracy),
            "overall_accuracy_value": num(self.overall_accuracy),
            "translation_accuracy": _ratio(self.translation_accuracy),
            "non_itn_accuracy": _ratio(self.non_itn_accuracy),
            "skipped_already_written": self.skipped_already_written,
            "unmatched_predictions": self.unmatched_predictions,
            "correct": self.correct,
            "total": self.total,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, ensure_ascii=False)

    def to_tsv(self) -> str:
        """Per-class table: class, size, accuracy (percent), then the overall row."""
        lines = ["class\tsize\taccuracy"]
        for cls in PRECEDENCE:
            if cls in self.per_class:
                c, t = self.per_class[cls]
                lines.append(f"{cls.value}\t{t}\t{100 * c / t:.2f}")
        overall = self.overall_accuracy
        lines.append(f"Overall\t{self.total}\t{'' if overall is None else f'{100 * float(overall):.2f}'}")
        return "\n".join(lines) + "\n"


# Stream plumbing


@dataclass(frozen=True)
class Record:
    """A sentence with its id, for plain sentence streams."""

    id: str
    text: str

    @classmethod
    def from_json(cls, data: Mapping) -> "Record":
        return cls(str(data["id"]), data["text"])


Item = Union[Record, SpokenWrittenPair]


def _written(item: Item) -> str:
    return item.written if isinstance(item, SpokenWrittenPair) else item.text


def _aligned(*streams: Iterable[Item]) -> Iterator[tuple[Item, ...]]:
    iters = [iter(s) for s in streams]
    sentinel = object()
    while True:
        items = [next(it, sentinel) for it in iters]
        if all(i is sentinel for i in items):
            return
        ids = [None if i is sentinel else i.id for i in items]
        if any(i is sentinel for i in items) or len(set(ids)) != 1:
            first = next(i for i in ids if i is not None)
            raise MisalignedStreamError(first, ids)
        yield tuple(items)


def score_entities(reference: Sequence[NormalizedEntity], predicted: Sequence[NormalizedEntity],
                   locale: LocaleProfile, report: EvalReport) -> None:
    """Pair the k-th reference entity of a class family with the k-th prediction of it."""
    by_family: dict[str, list[NormalizedEntity]] = defaultdict(list)
    for e in predicted:
        by_family[e.family].append(e)
    used: dict[str, int] = defaultdict(int)
    for ref in reference:
        k = used[ref.family]
        pool = by_family.get(ref.family, [])
        used[ref.family] += 1
        report.add(ref.cls, k < len(pool) and entities_equivalent(ref, pool[k], locale))
    for fam, pool in by_family.items():
        report.unmatched_predictions += max(0, len(pool) - used.get(fam, 0))


def evaluate_case_a(predictions: Iterable[Item], references: Iterable[Item],
                    locale: LocaleProfile) -> EvalReport:
    """Score predictions against target-language references (same locale)."""
    report = EvalReport()
    for pred, ref in _aligned(predictions, references):
        score_entities(extract_normalized_entities(_written(ref), locale),
                       extract_normalized_entities(_written(pred), locale), locale, report)
    return report


def _has_digit(text: str) -> bool:
    return any(ch.isdigit() for ch in text)


def evaluate_case_b(english_reference: Iterable[Item], target_spoken: Iterable[Item],
                    target_predictions: Iterable[Item], locale: LocaleProfile,
                    source_locale: Optional[LocaleProfile] = None) -> EvalReport:
    """Score target-language predictions against English written references.

    Items whose translated spoken input already contains digits are
    discarded and counted under ``skipped_already_written``.
    """
    source_locale = source_locale or bundled_locale("en")
    report = EvalReport()
    for ref, spoken, pred in _aligned(english_reference, target_spoken, target_predictions):
        if _has_digit(_written(spoken) if isinstance(spoken, Record) else spoken.spoken_text):
            report.skipped_already_written += 1
            continue
        score_entities(extract_normalized_entities(_written(ref), source_locale),
                       extract_normalized_entities(_written(pred), locale), locale, report)
    return report


def translation_accuracy(source: Iterable[SpokenWrittenPair], translated: Iterable[SpokenWrittenPair],
                         locale: LocaleProfile, source_locale: Optional[LocaleProfile] = None) -> Optional[Rational]:
    """Fraction of source entities whose spoken and written forms survive translation.

    For the k-th entity of a source pair, the translated written side must
    hold an equivalent digit-form entity at the same position within its
    class family, and the k-th entity phrase of the translated spoken side
    must still be spelled out.
    """
    source_locale = source_locale or bundled_locale("en")
    correct = total = 0
    for src, tgt in _aligned(source, translated):
        refs = [e for e in extract_normalized_entities(src.written, source_locale) if not e.word_form]
        outs = extract_normalized_entities(tgt.written, locale)
        spoken_forms = entity_regions(tgt.spoken_text, locale)
        by_family: dict[str, list[NormalizedEntity]] = defaultdict(list)
        for e in outs:
            by_family[e.family].append(e)
        seen: dict[str, int] = defaultdict(int)
        for k, ref in enumerate(refs):
            pool = by_family.get(ref.family, [])
            j = seen[ref.family]
            seen[ref.family] += 1
            written_ok = j < len(pool) and not pool[j].word_form and entities_equivalent(ref, pool[j], locale)
            spoken_ok = k < len(spoken_forms) and not spoken_forms[k]
            correct += written_ok and spoken_ok
            total += 1
    return Rational(correct, total) if total else None


def non_itn_accuracy(predictions: Iterable[Item], references: Iterable[Item],
                     locale: LocaleProfile) -> Optional[Rational]:
    """Fraction of sentences whose text outside entities matches token for token."""
    same = total = 0
    for pred, ref in _aligned(predictions, references):
        same += mask_written(_written(pred), locale) == mask_written(_written(ref), locale)
        total += 1
    return Rational(same, total) if total else None
