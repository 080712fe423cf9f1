"""Corpus ingestion and quality filters for spoken/written pair files.

The filters work on any bundled locale: number words are recognised with a
small lexicon-driven reader (:func:`lexicon_runs`) that understands the
compounding habits of the supported languages -- hyphenated compounds
("quatre-vingt-dix"), fused compounds ("einundzwanzig", "trentuno"),
connectives ("treinta y uno") and hundred/magnitude scaling.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, Union

from .domain import ItnKitError, LocaleProfile, SpokenWrittenPair, bundled_locale
from .editdistance import edit_distance
from .segmenter import get_segmenter

REASONS = ("spoken-written-mismatch", "high-wer", "conformity-failure")
ENTITY_MASK = "<E>"


class IngestError(ItnKitError):
    """The corpus file could not be read or decoded."""


class EmptyReferenceError(ValueError):
    pass


class MisalignedStreamError(ItnKitError):
    def __init__(self, expected, found):
        super().__init__(f"stream misaligned at id {expected!r} (found {found!r})")
        self.expected = expected
        self.found = found


# Ingestion


@dataclass(frozen=True)
class Sentence:
    id: int  # 1-based line number in the source file
    text: str


def ingest(path: Union[str, Path]) -> Iterator[Sentence]:
    """Yield trimmed, non-empty lines of a UTF-8 file with their line numbers."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise IngestError(f"{path}: invalid UTF-8 byte at offset {exc.start}") from exc
    for number, line in enumerate(text.split("\n"), 1):
        line = line.strip()
        if line:
            yield Sentence(number, line)


# Word error rate


def wer(reference: Sequence[str], hypothesis: Sequence[str]) -> Fraction:
    """Token-level word error rate as an exact rational."""
    if len(reference) == 0:
        raise EmptyReferenceError("reference must contain at least one token")
    return Fraction(edit_distance(list(reference), list(hypothesis)), len(reference))


_PUNCT = re.compile(r"^\W+|\W+$")


def normalize_tokens(text: str) -> list[str]:
    """Lower-cased whitespace tokens with surrounding punctuation removed."""
    out = []
    for tok in text.lower().split():
        tok = _PUNCT.sub("", tok)
        if tok:
            out.append(tok)
    return out


def back_translation_check(original: str, back: str) -> Fraction:
    """WER of a back-translation against the original English sentence."""
    return wer(normalize_tokens(original), normalize_tokens(back))


# Lexicon number reading


@dataclass(frozen=True)
class LexRun:
    start: int  # token index, inclusive
    end: int  # token index, exclusive
    digits: str
    words: tuple[str, ...]
    ambiguous: bool = False  # a lone word such as "one" that may not be a number


_SCALING = ("hundred", "hundreds")


class _Reader:
    """Number-word lexicon of one locale, including compound splitting."""

    def __init__(self, locale: LocaleProfile):
        self.locale = locale
        self.pieces: dict[str, tuple[int, str]] = {}
        for word, nw in locale.number_words.items():
            if nw.role != "denominator":
                self.pieces[word.lower()] = (nw.value, nw.role)
        for word, power in locale.magnitude_lexicon.items():
            self.pieces[word.lower()] = (10 ** power, "magnitude")
        self.connectives = {w for w, (_, r) in self.pieces.items() if r == "connective"}
        self.ambiguous = {w.lower() for w in locale.ambiguous_number_words}
        self._longest = max(map(len, self.pieces), default=0)

    @lru_cache(maxsize=None)
    def resolve(self, token: str) -> Optional[tuple[tuple[int, str], ...]]:
        """Split a token into lexicon pieces, or None if it is not a number word."""
        if token in self.pieces:
            return (self.pieces[token],)
        if "-" in token:
            return self._hyphenated([p for p in token.split("-") if p])
        return self._fused(token)

    def _hyphenated(self, parts: list[str]) -> Optional[tuple[tuple[int, str], ...]]:
        # Longest lexicon entries first, so "quatre-vingt-dix" reads as
        # "quatre-vingt" + "dix" rather than 4 + 20 + 10.
        out: tuple = ()
        i = 0
        while i < len(parts):
            for j in range(len(parts), i, -1):
                key = "-".join(parts[i:j])
                found = (self.pieces[key],) if key in self.pieces else (
                    self._fused(key) if j == i + 1 else None)
                if found:
                    out += found
                    i = j
                    break
            else:
                return None
        if not out or out[0][1] == "connective" or out[-1][1] == "connective":
            return None
        return out

    def _fused(self, token: str) -> Optional[tuple[tuple[int, str], ...]]:
        # Fewest-pieces segmentation of a fused compound into >= 2 pieces.
        n = len(token)
        best: list[Optional[tuple]] = [None] * (n + 1)
        best[0] = ()
        for i in range(n):
            if best[i] is None:
                continue
            for j in range(i + 1, min(n, i + self._longest) + 1):
                piece = self.pieces.get(token[i:j]) if j - i > 1 else None
                if piece is None:
                    continue
                cand = best[i] + (piece,)
                if best[j] is None or len(cand) < len(best[j]):
                    best[j] = cand
        out = best[n]
        if not out or len(out) < 2:
            return None
        if out[0][1] == "connective" or out[-1][1] == "connective":
            return None
        return out


@lru_cache(maxsize=16)
def _reader(locale: LocaleProfile) -> _Reader:
    return _Reader(locale)


class _Accumulator:
    """Value of one spoken number segment being read left to right."""

    def __init__(self):
        self.total = 0
        self.small = 0
        self.last: Optional[str] = None
        self.pieces = 0

    @property
    def value(self) -> int:
        return self.total + self.small

    def composes(self, value: int, role: str, joined: bool = False) -> bool:
        """Whether a piece from a *separate* token continues this segment.

        ``joined`` means a connective sits in between, which additionally
        lets a teen follow a tens word ("soixante et onze").
        """
        last = self.last
        if last is None:
            return True
        if last == "ordinal" or (last == "unit" and self.value == 0):
            return False
        if role == "hundred":
            return last == "unit" and self.small < 10
        if role == "magnitude":
            return last != "magnitude" or self.small == 0
        if role in ("unit", "ordinal") and value < 10 and last == "tens":
            return True
        if joined and role == "teen" and last == "tens" and self.small % 10 == 0:
            return True
        if last in _SCALING:
            return value < 100 and self.small % 100 == 0
        if last == "magnitude":
            return role in ("unit", "teen", "tens", "hundred", "hundreds", "ordinal")
        return False

    def add(self, value: int, role: str) -> None:
        if role == "hundred":
            self.small = (self.small or 1) * value
        elif role == "magnitude":
            self.total += (self.small or 1) * value
            self.small = 0
        else:
            self.small += value
        self.last = role
        self.pieces += 1


def lexicon_runs(tokens: Sequence[str], locale: LocaleProfile,
                 keep_ambiguous: bool = False) -> list[LexRun]:
    """Maximal runs of number words in ``tokens``.

    A run is a sequence of adjacent number segments; its ``digits`` are the
    segment values concatenated, so "eight o one" reads as ``801`` and
    "twenty twenty" as ``2020``.  A run made of a single ambiguous word
    ("one", "un") is dropped, since those double as pronouns/articles, unless
    ``keep_ambiguous`` is set (it is then flagged ``ambiguous``).
    Zero words are always their own segment.
    """
    reader = _reader(locale)
    norm = [_PUNCT.sub("", t.lower()) for t in tokens]
    runs: list[LexRun] = []
    i, n = 0, len(norm)
    while i < n:
        pieces = reader.resolve(norm[i]) if norm[i] else None
        if pieces is None or norm[i] in reader.connectives:
            i += 1
            continue
        start = i
        segments: list[int] = []
        acc = _Accumulator()
        joined = False
        while i < n:
            pieces = reader.resolve(norm[i]) if norm[i] else None
            if pieces is None:
                break
            if norm[i] in reader.connectives:
                # "hundred and five" joins; "six and fifteen" is two numbers.
                nxt = reader.resolve(norm[i + 1]) if i + 1 < n and norm[i + 1] else None
                if (nxt is None or norm[i + 1] in reader.connectives or acc.last is None
                        or not acc.composes(*nxt[0], joined=True)):
                    break
                joined = True
                i += 1
                continue
            first_value, first_role = pieces[0]
            is_zero = len(pieces) == 1 and first_role == "unit" and first_value == 0
            if acc.last is not None and (is_zero or not acc.composes(first_value, first_role, joined)):
                segments.append(acc.value)
                acc = _Accumulator()
            for value, role in pieces:
                if role != "connective":
                    acc.add(value, role)
            joined = False
            i += 1
            if is_zero:
                segments.append(0)
                acc = _Accumulator()
        if acc.last is not None:
            segments.append(acc.value)
        end = i
        while end > start and norm[end - 1] in reader.connectives:
            end -= 1
        words = tuple(norm[start:end])
        ambiguous = len(words) == 1 and words[0] in reader.ambiguous
        if not segments or (ambiguous and not keep_ambiguous):
            continue
        runs.append(LexRun(start, end, "".join(str(s) for s in segments), words, ambiguous))
    return runs


def spoken_digits(text: str, locale: LocaleProfile) -> Counter:
    """Multiset of digit characters carried by the number words of ``text``."""
    out: Counter = Counter()
    for run in lexicon_runs(text.split(), locale):
        out.update(run.digits)
    return out


# Masking

# Words that belong to an entity's spoken phrase without being number words:
# clock words, meridiem phrases, percent/degree words ("suffix"); words that
# may sit between two parts of one entity ("bridge"); and words that may open
# an entity phrase ("prefix").  A "conjunction" bridge only joins when one side
# carries entity words besides numbers: "one dollar and twenty cents" is one
# entity, "twelve and fourteen" is two.  Units, currencies and months come from the
# locale profile itself.
_ENTITY_PHRASES = {
    "en": {
        "suffix": ("hour", "hours", "minute", "minutes", "second", "seconds", "o'clock",
                   "a m", "p m", "am", "pm", "in the morning", "in the afternoon",
                   "in the evening", "percent", "degree", "degrees"),
        "bridge": ("and", "point", "past", "to", "of", "over", "and a", "and the", "the"),
        "prefix": ("the", "a", "half past", "quarter past", "quarter to", "minus"),
        "conjunction": ("and",),
    },
    "fr": {
        "suffix": ("heure", "heures", "minute", "minutes", "seconde", "secondes",
                   "du matin", "de l'après-midi", "du soir", "pour cent", "degré", "degrés"),
        "bridge": ("et", "virgule", "sur"),
        "prefix": ("moins",),
        "conjunction": ("et",),
    },
    "de": {
        "suffix": ("uhr", "stunde", "stunden", "minute", "minuten", "sekunde", "sekunden",
                   "prozent", "grad"),
        "bridge": ("und", "komma"),
        "prefix": ("minus",),
        "conjunction": ("und",),
    },
    "es": {
        "suffix": ("hora", "horas", "minuto", "minutos", "segundo", "segundos", "por ciento",
                   "de la mañana", "de la tarde", "de la noche", "grado", "grados"),
        "bridge": ("y", "coma", "con", "de"),
        "prefix": ("menos",),
        "conjunction": ("y",),
    },
    "it": {
        "suffix": ("ora", "ore", "minuto", "minuti", "secondo", "secondi", "per cento",
                   "del mattino", "del pomeriggio", "di sera", "grado", "gradi"),
        "bridge": ("e", "virgola", "di"),
        "prefix": ("meno",),
        "conjunction": ("e",),
    },
}


@lru_cache(maxsize=16)
def _phrases(locale: LocaleProfile) -> dict[str, tuple[tuple[str, ...], ...]]:
    table = _ENTITY_PHRASES.get(locale.language, {})
    lexical: set[tuple[str, ...]] = set()
    for unit in locale.units.values():
        lexical.update(tuple(f.lower().split()) for f in (*unit.singular, *unit.plural))
    for cur in locale.currencies.values():
        lexical.update(tuple(f.lower().split()) for f in (*cur.major, *cur.minor))
    lexical.update((m.lower(),) for m in locale.months)
    lexical.update((m.lower().rstrip("."),) for m in locale.month_abbreviations)

    def phrases(kind):
        return tuple(sorted({tuple(p.split()) for p in table.get(kind, ())}, key=len, reverse=True))

    suffix = tuple(sorted(lexical | set(phrases("suffix")), key=len, reverse=True))
    return {"suffix": suffix, "bridge": phrases("bridge"), "prefix": suffix + phrases("prefix"),
            "conjunction": phrases("conjunction")}


def _match_at(norm: Sequence[str], i: int, phrases) -> int:
    for p in phrases:
        if tuple(norm[i:i + len(p)]) == p:
            return len(p)
    return 0


def _match_before(norm: Sequence[str], i: int, phrases) -> int:
    for p in phrases:
        if i - len(p) >= 0 and tuple(norm[i - len(p):i]) == p:
            return len(p)
    return 0


def _mask_regions(norm: list[str], masked: list[bool], locale: LocaleProfile,
                  join_conjunctions: bool = False) -> list[tuple[int, int]]:
    """Token ranges covered by entities, in order, one range per entity.

    With ``join_conjunctions`` any two entities separated only by a
    conjunction become one range, whatever their form, so that "sei e
    quindici" and "6:15" mask alike for comparison.
    """
    table = _phrases(locale)

    def grow(lo, hi):
        while (k := _match_at(norm, hi, table["suffix"])):
            hi += k
        while (k := _match_before(norm, lo, table["prefix"])):
            lo -= k
        return lo, hi

    # (lo, hi, written, grown): grown ranges took in words beyond the numbers.
    regions = [(*grow(i, i + 1), True, True) for i in range(len(norm)) if masked[i]]
    for run in lexicon_runs(norm, locale, keep_ambiguous=True):
        lo, hi = grow(run.start, run.end)
        grown = (lo, hi) != (run.start, run.end)
        # A lone "one"/"un" counts only when entity words surround it.
        if not run.ambiguous or grown:
            regions.append((lo, hi, False, grown))
    regions.sort()
    # A bridge word between two spoken phrases joins them into one entity
    # ("one dollar and twenty cents"); overlapping ranges always merge.
    merged: list[list] = []
    for lo, hi, written, grown in regions:
        if merged:
            prev = merged[-1]
            gap = lo - prev[1]
            conj = gap > 0 and _match_at(norm, prev[1], table["conjunction"]) == gap
            bridged = (conj and join_conjunctions) or (
                not written and not prev[2] and gap > 0
                and _match_at(norm, prev[1], table["bridge"]) == gap
                and (grown or prev[3] or not conj))
            if gap <= 0 or bridged:
                prev[1] = max(prev[1], hi)
                prev[2] = prev[2] or written
                prev[3] = prev[3] or grown
                continue
        merged.append([lo, hi, written, grown])
    return [(lo, hi) for lo, hi, *_ in merged]


def _mask_tokens(norm: list[str], masked: list[bool], locale: LocaleProfile) -> list[str]:
    cover = [False] * len(norm)
    for lo, hi in _mask_regions(norm, masked, locale, join_conjunctions=True):
        for k in range(lo, hi):
            cover[k] = True
    return _collapse(ENTITY_MASK if c else t for t, c in zip(norm, cover) if c or t)


def _collapse(tokens: Iterable[str]) -> list[str]:
    out: list[str] = []
    for tok in tokens:
        if tok == ENTITY_MASK and out and out[-1] == ENTITY_MASK:
            continue
        out.append(tok)
    return out


def mask_spoken(text: str, locale: LocaleProfile) -> list[str]:
    """Normalized tokens of a spoken rendition with entity phrases masked."""
    norm = normalize_tokens(text)
    return _mask_tokens(norm, [False] * len(norm), locale)


def _premasked(text: str, locale: LocaleProfile) -> tuple[list[str], list[bool]]:
    seg = get_segmenter(locale).segment(text)
    norm: list[str] = []
    masked: list[bool] = []
    last = 0
    for span in (*seg.spans, None):
        chunk = text[last:span.start] if span is not None else text[last:]
        for tok in normalize_tokens(chunk):
            norm.append(tok)
            masked.append(False)
        if span is not None:
            norm.append(ENTITY_MASK)
            masked.append(True)
            last = span.end
    return norm, masked


def mask_written(text: str, locale: LocaleProfile) -> list[str]:
    """Normalized tokens of a written rendition with entity spans masked.

    Segmenter spans are masked first; number words left on the written side
    are masked too, so that only non-entity text is compared.
    """
    return _mask_tokens(*_premasked(text, locale), locale)


def entity_regions(text: str, locale: LocaleProfile) -> list[bool]:
    """One flag per entity of ``text`` in order: True if it is in written form.

    Entities are segmenter spans (written form) and number-word phrases
    (spoken form); a phrase mixing both counts as written.
    """
    norm, masked = _premasked(text, locale)
    return [any(masked[lo:hi]) for lo, hi in _mask_regions(norm, masked, locale)]


# Filtering


@dataclass
class FilterReport:
    total: int = 0
    kept: int = 0
    rejected: dict[str, int] = field(default_factory=lambda: dict.fromkeys(REASONS, 0))

    def record(self, reason: Optional[str]) -> None:
        self.total += 1
        if reason is None:
            self.kept += 1
        else:
            self.rejected[reason] += 1

    def merge(self, other: "FilterReport") -> "FilterReport":
        merged = FilterReport(self.total + other.total, self.kept + other.kept)
        for r in REASONS:
            merged.rejected[r] = self.rejected[r] + other.rejected[r]
        return merged

    def to_json(self) -> dict:
        return {"kept": self.kept, "rejected": dict(sorted(self.rejected.items())), "total": self.total}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)


def _has_digit(text: str) -> bool:
    return any(ch.isdigit() for ch in text)


def check_pair(source: SpokenWrittenPair, translated: SpokenWrittenPair, locale: LocaleProfile,
               wer_threshold: Fraction = Fraction(0),
               source_locale: Optional[LocaleProfile] = None) -> Optional[str]:
    """Rejection reason for one aligned pair, or None if it is kept.

    Checks run in a fixed order -- form mismatch, conformity, then WER --
    and the first failing check names the reason.
    """
    source_locale = source_locale or bundled_locale("en")
    src_seg = get_segmenter(source_locale).segment(source.written)
    tgt_seg = get_segmenter(locale).segment(translated.written)
    # (a) spoken side must stay spoken; written side must keep every entity.
    if _has_digit(translated.spoken_text) or len(src_seg.spans) != len(tgt_seg.spans):
        return "spoken-written-mismatch"
    # (c) the target's number words must carry the source's number.
    if spoken_digits(source.spoken_text, source_locale) != spoken_digits(translated.spoken_text, locale):
        return "conformity-failure"
    # (b) the two renditions must agree outside the entities.
    spoken_masked = mask_spoken(translated.spoken_text, locale)
    written_masked = mask_written(translated.written, locale)
    if not spoken_masked:
        return None if not written_masked else "high-wer"
    if wer(spoken_masked, written_masked) > wer_threshold:
        return "high-wer"
    return None


def filter_pairs(source: Iterable[SpokenWrittenPair], translated: Iterable[SpokenWrittenPair],
                 locale: LocaleProfile, wer_threshold=Fraction(0),
                 source_locale: Optional[LocaleProfile] = None,
                 ) -> tuple[list[SpokenWrittenPair], FilterReport]:
    """Keep translated pairs that pass all three quality checks.

    ``source`` and ``translated`` must carry the same ids in the same order.
    """
    threshold = Fraction(wer_threshold)
    report = FilterReport()
    kept: list[SpokenWrittenPair] = []
    src_iter, tgt_iter = iter(source), iter(translated)
    sentinel = object()
    while True:
        s = next(src_iter, sentinel)
        t = next(tgt_iter, sentinel)
        if s is sentinel and t is sentinel:
            break
        if s is sentinel or t is sentinel or s.id != t.id:
            expected = None if s is sentinel else s.id
            found = None if t is sentinel else t.id
            raise MisalignedStreamError(expected if expected is not None else found, found)
        reason = check_pair(s, t, locale, threshold, source_locale)
        report.record(reason)
        if reason is None:
            kept.append(t)
    return kept, report


def read_pairs(path: Union[str, Path]) -> list[SpokenWrittenPair]:
    """Read a JSON Lines pair file."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(SpokenWrittenPair.from_json(json.loads(line)))
    return out


def write_pairs(pairs: Iterable[SpokenWrittenPair], path: Union[str, Path]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pair in pairs:
            fh.write(json.dumps(pair.to_json(), ensure_ascii=False, sort_keys=True) + "\n")
            count += 1
    return count


def write_tsv(pairs: Iterable[SpokenWrittenPair], path: Union[str, Path]) -> int:
    """Two-column ``spoken<TAB>written`` file; tabs and newlines inside are blanked."""
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pair in pairs:
            cells = (re.sub(r"[\t\r\n]", " ", c) for c in (pair.spoken_text, pair.written))
            fh.write("\t".join(cells) + "\n")
            count += 1
    return count
