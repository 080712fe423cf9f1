"""Spoken/written pair augmentation, rule-based ITN and locale-aware ITN evaluation."""

from .domain import (
    AugmentationConfig,
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
    SpokenWrittenPair,
    Telephone,
    Time,
    bundled_locale,
    load_locale,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentationConfig", "Cardinal", "Date", "Decimal", "DigitSequence", "EntityClass",
    "EntitySpan", "Fraction", "LocaleProfile", "Measure", "Money", "Ordinal",
    "SpokenWrittenPair", "Telephone", "Time", "bundled_locale", "load_locale",
]
