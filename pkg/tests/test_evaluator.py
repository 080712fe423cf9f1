import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from itnkit.domain import EntityClass, SpokenWrittenPair
from itnkit.evaluator import (
    EvalReport, Record, entities_equivalent, evaluate_case_a, evaluate_case_b,
    extract_normalized_entities, non_itn_accuracy, translation_accuracy,
)
from itnkit.pipeline import MisalignedStreamError
from conftest import FIXTURES

EVAL = FIXTURES / "eval"


def load(name):
    with open(EVAL / name, encoding="utf-8") as fh:
        return [Record.from_json(json.loads(line)) for line in fh if line.strip()]


def one(text, locale):
    [entity] = extract_normalized_entities(text, locale)
    return entity


@pytest.mark.parametrize("src, tgt, expected", [
    ("1:30 p.m.", "13h30", True),
    ("24,000", "24 mille", True),
    ("two children", "2 enfants", True),
    ("9 out of", "neuf sur", False),
    ("6 PM", "18h", True),
    ("60th", "60ème", True),
    ("25,000.00", "25 000,00", True),
    ("6 PM", "19h", False),
])
def test_equivalence_examples(en, fr, src, tgt, expected):
    assert entities_equivalent(one(src, en), one(tgt, fr), fr) is expected


def test_small_cardinal_rule_is_directional(en, fr):
    # English word against French digit is accepted; the reverse is not.
    assert entities_equivalent(one("two", en), one("2", fr), fr)
    assert not entities_equivalent(one("2", en), one("deux", fr), fr)


@pytest.mark.parametrize("text", ["1:30 p.m.", "24,000", "60th", "$25", "12 kg", "3/4", "007"])
def test_equivalence_reflexive(en, text):
    e = one(text, en)
    assert entities_equivalent(e, e, en)


def test_extraction(en, fr):
    got = [(e.cls, e.digits) for e in extract_normalized_entities("Dad's 60th is at 6 PM.", en)]
    assert got == [(EntityClass.ORDINAL, "60"), (EntityClass.TIME, "600")]
    assert one("18h", fr).clock24 == frozenset({"18:00"})
    assert extract_normalized_entities("no numbers here", en) == []


def test_case_a_caption_fixture(en):
    report = evaluate_case_a(load("case_a.predictions.jsonl"), load("case_a.references.jsonl"), en)
    assert report.overall_accuracy == Fraction(4, 5)
    assert report.to_json() == json.loads((EVAL / "case_a.expected.json").read_text())


def test_case_a_identical_is_perfect(en):
    refs = load("case_a.references.jsonl")
    assert evaluate_case_a(refs, refs, en).overall_accuracy == 1


def test_case_a_two_of_three(en):
    refs = [Record("1", "I have 3 cats, 4 dogs and 5 fish.")]
    preds = [Record("1", "I have 3 cats, 4 dogs and 6 fish.")]
    assert evaluate_case_a(preds, refs, en).overall_accuracy == Fraction(2, 3)


def case_b_streams():
    return (load("case_b.en_reference.jsonl"), load("case_b.fr_spoken.jsonl"),
            load("case_b.fr_predictions.jsonl"))


def test_case_b_fixture(fr):
    report = evaluate_case_b(*case_b_streams(), fr)
    assert report.to_json() == json.loads((EVAL / "case_b.expected.json").read_text())
    assert sum(t for _, t in report.per_class.values()) == report.total


def test_case_b_table_rows(fr):
    ref, spoken, pred = (s[:2] for s in case_b_streams())
    report = evaluate_case_b(ref[:1], spoken[:1], pred[:1], fr)
    assert (report.correct, report.total) == (1, 2)
    report = evaluate_case_b(ref[1:2], spoken[1:2], pred[1:2], fr)
    assert (report.correct, report.total) == (2, 2)


@settings(max_examples=20, deadline=None)
@given(st.randoms(use_true_random=False))
def test_case_b_permutation_invariant(fr, rnd):
    ref, spoken, pred = case_b_streams()
    order = list(range(len(ref)))
    rnd.shuffle(order)
    shuffled = [[s[i] for i in order] for s in (ref, spoken, pred)]
    assert evaluate_case_b(*shuffled, fr).to_json() == evaluate_case_b(ref, spoken, pred, fr).to_json()


def test_case_b_monotone_under_corruption(fr):
    ref, spoken, pred = case_b_streams()
    base = evaluate_case_b(ref, spoken, pred, fr).overall_accuracy
    rng = random.Random(5)
    for _ in range(10):
        k = rng.randrange(len(pred))
        corrupted = list(pred)
        corrupted[k] = Record(pred[k].id, "Rien à voir ici.")
        assert evaluate_case_b(ref, spoken, corrupted, fr).overall_accuracy <= base


def test_case_b_misaligned(fr):
    ref, spoken, pred = case_b_streams()
    with pytest.raises(MisalignedStreamError):
        evaluate_case_b(ref, spoken[1:], pred, fr)


def pair(ident, spoken, written, lang):
    return SpokenWrittenPair(tuple(spoken.split()), written, lang, id=ident,
                             provenance="human" if lang == "en" else "translated")


def test_translation_accuracy_one_flip(fr):
    source = [pair("1", "Arrive before six p m with two thousand tickets .",
                   "Arrive before 6 PM with 2,000 tickets.", "en"),
              pair("2", "Rooms twelve and fourteen are free .", "Rooms 12 and 14 are free.", "en")]
    translated = [pair("1", "Arrivez avant dix-huit heures avec deux mille billets .",
                       "Arrivez avant 18h avec 2 000 billets.", "fr"),
                  pair("2", "Les chambres 12 et quatorze sont libres .",
                       "Les chambres 12 et 14 sont libres.", "fr")]
    assert translation_accuracy(source, translated, fr) == Fraction(3, 4)
    fixed = translated[:1] + [pair("2", "Les chambres douze et quatorze sont libres .",
                                   "Les chambres 12 et 14 sont libres.", "fr")]
    assert translation_accuracy(source, fixed, fr) == 1


def test_non_itn_accuracy(en):
    refs = [Record(str(i), f"Sentence number {i} talks about item {i + 1}.") for i in range(50)]
    preds = list(refs)
    preds[17] = Record("17", "Sentence number 17 speaks about item 18.")
    assert non_itn_accuracy(preds, refs, en) == Fraction(49, 50)
    assert non_itn_accuracy(refs, refs, en) == 1


def test_report_merge_and_tsv():
    a, b = EvalReport(), EvalReport()
    a.add(EntityClass.TIME, True)
    b.add(EntityClass.TIME, False)
    b.add(EntityClass.CARDINAL, True)
    merged = a.merge(b)
    assert merged.per_class[EntityClass.TIME] == [1, 2]
    assert merged.overall_accuracy == Fraction(2, 3)
    assert merged.to_tsv().splitlines()[-1] == "Overall\t3\t66.67"
