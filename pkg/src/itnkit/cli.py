"""Command-line entry point: ``itnkit <subcommand> ...``.

Subcommands: augment, itn, filter, evaluate, bridge-run, stats.  Every
subcommand accepts ``--locale``, ``--seed``, ``--jobs`` and ``--config``;
a ``--config`` JSON file supplies defaults which explicit flags override.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .bridge import BridgeSpec, run_batch
from .domain import (AugmentationConfig, EntityClass, ItnKitError, SpokenWrittenPair, bundled_locale,
                     load_locale, locale_from_dict)
from .evaluator import Record, evaluate_case_a, evaluate_case_b, non_itn_accuracy, translation_accuracy
from .generator import EmptyStreamError, diversity_factor, rewrite
from .itn_rules import itn
from .pipeline import filter_pairs, ingest, read_pairs, write_pairs, write_tsv
from .segmenter import get_segmenter


def _locale(spec: str):
    if spec.endswith(".json") or "/" in spec:
        return load_locale(spec)
    return bundled_locale(spec)


def _write_json(data, path: Optional[str]) -> None:
    text = json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _read_items(path: str) -> list:
    """JSON Lines records: pairs if they carry "written", else id/text records."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            out.append(SpokenWrittenPair.from_json(obj) if "written" in obj else Record.from_json(obj))
    return out


def _ratio(r) -> Optional[str]:
    return None if r is None else f"{r.numerator}/{r.denominator}"


# augment


_worker_config: Optional[AugmentationConfig] = None


def _init_worker(locale_doc: dict, max_variants, max_pairs, seed, classes) -> None:
    # Locale profiles hold read-only mappings that do not pickle, so workers
    # rebuild theirs from the JSON document.
    global _worker_config
    locale = locale_from_dict(locale_doc)
    _worker_config = AugmentationConfig(locale, max_variants, max_pairs, seed,
                                        frozenset(EntityClass(c) for c in classes))


def _augment_line(job, config: Optional[AugmentationConfig] = None):
    ident, text = job
    config = config or _worker_config
    seg = get_segmenter(config.locale, config.enabled_classes).segment(text)
    pairs = rewrite(text, seg, config.locale, config)
    return [SpokenWrittenPair(p.spoken, p.written, p.language, p.alignments, p.provenance, f"{ident}-{k}")
            for k, p in enumerate(pairs)]


def _pair_stats(pairs: Sequence[SpokenWrittenPair]) -> dict:
    classes: Counter = Counter()
    for pair in pairs:
        for al in pair.alignments:
            classes[al.span.cls.value] += 1
    try:
        diversity = diversity_factor(pairs)
    except EmptyStreamError:
        diversity = None
    return {
        "pairs": len(pairs),
        "entities": sum(classes.values()),
        "entities_per_class": dict(sorted(classes.items())),
        "diversity_factor": _ratio(diversity),
        "diversity_factor_value": None if diversity is None else float(diversity),
    }


def cmd_augment(args) -> int:
    locale = _locale(args.locale)
    classes = frozenset(EntityClass(c) for c in args.classes) if args.classes else frozenset(EntityClass)
    config = AugmentationConfig(locale, args.max_variants or None, args.max_pairs, args.seed, classes)
    segmenter = get_segmenter(locale, classes)
    sentences = [s for s in ingest(args.input) if segmenter.pick(s.text)]
    jobs = [(s.id, s.text) for s in sentences]
    if args.jobs > 1 and len(jobs) > 1:
        init = (locale.to_dict(), config.max_variants_per_entity, config.max_pairs_per_sentence,
                config.seed, sorted(c.value for c in classes))
        with ProcessPoolExecutor(args.jobs, initializer=_init_worker, initargs=init) as pool:
            chunks = list(pool.map(_augment_line, jobs, chunksize=32))
    else:
        chunks = [_augment_line(j, config) for j in jobs]
    pairs = [p for chunk in chunks for p in chunk]
    if args.format == "tsv":
        write_tsv(pairs, args.output)
    else:
        write_pairs(pairs, args.output)
    stats = {"picked_sentences": len(sentences), "seed": args.seed, **_pair_stats(pairs)}
    _write_json(stats, args.stats or str(Path(args.output)) + ".stats.json")
    return 0


# itn


def cmd_itn(args) -> int:
    locale = _locale(args.locale)
    source = open(args.input, encoding="utf-8") if args.input != "-" else sys.stdin
    sink = open(args.output, "w", encoding="utf-8", newline="\n") if args.output != "-" else sys.stdout
    try:
        for line in source:
            text = line.rstrip("\n")
            sink.write((itn(text, locale) if text.strip() else text) + "\n")
    finally:
        if source is not sys.stdin:
            source.close()
        if sink is not sys.stdout:
            sink.close()
    return 0


# filter


def cmd_filter(args) -> int:
    locale = _locale(args.locale)
    source_locale = _locale(args.source_locale)
    kept, report = filter_pairs(read_pairs(args.source), read_pairs(args.translated), locale,
                                Fraction(args.wer_threshold), source_locale)
    write_pairs(kept, args.output)
    _write_json(report.to_json(), args.report)
    return 0


# evaluate


def cmd_evaluate(args) -> int:
    locale = _locale(args.locale)
    if args.case == "a":
        preds, refs = _read_items(args.predictions), _read_items(args.references)
        report = evaluate_case_a(preds, refs, locale)
        if args.non_itn:
            report.non_itn_accuracy = non_itn_accuracy(preds, refs, locale)
    else:
        if not args.target_spoken:
            raise ItnKitError("--case b needs --target-spoken")
        report = evaluate_case_b(_read_items(args.references), _read_items(args.target_spoken),
                                 _read_items(args.predictions), locale, _locale(args.source_locale))
    if args.source and args.translated:
        report.translation_accuracy = translation_accuracy(
            read_pairs(args.source), read_pairs(args.translated), locale, _locale(args.source_locale))
    _write_json(report.to_json(), args.report)
    if args.tsv:
        Path(args.tsv).write_text(report.to_tsv(), encoding="utf-8")
    return 0


# bridge-run


def _bridge_inputs(path: str) -> list[tuple[str, str]]:
    items = []
    with open(path, encoding="utf-8") as fh:
        for number, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if path.endswith(".jsonl"):
                if line.strip():
                    obj = json.loads(line)
                    items.append((str(obj["id"]), obj["text"]))
            else:
                items.append((str(number), line))
    return items


def cmd_bridge_run(args) -> int:
    spec = BridgeSpec.load(args.spec)
    results = run_batch(_bridge_inputs(args.input), spec, jobs=args.jobs)
    failed_path = args.failed or args.output + ".failed.jsonl"
    with open(args.output, "w", encoding="utf-8", newline="\n") as out, \
            open(failed_path, "w", encoding="utf-8", newline="\n") as failed:
        for r in results:
            target = out if r.ok else failed
            target.write(json.dumps(r.to_json(), ensure_ascii=False, sort_keys=True) + "\n")
    return 0


# stats


def cmd_stats(args) -> int:
    pairs = read_pairs(args.input)
    stats = _pair_stats(pairs)
    stats["sha256"] = hashlib.sha256(Path(args.input).read_bytes()).hexdigest()
    _write_json(stats, args.output)
    return 0


# Options that must be set by a flag or by the --config file; they are
# checked after the config defaults are merged in.
_REQUIRED = {
    "augment": ("input", "output"),
    "filter": ("source", "translated", "output"),
    "evaluate": ("case", "predictions", "references"),
    "bridge-run": ("spec", "input", "output"),
    "stats": ("input",),
}


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--locale", default="en", help="bundled locale tag or path to a locale JSON file")
    shared.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    shared.add_argument("--jobs", type=int, default=1, help="worker processes (output order is fixed)")
    shared.add_argument("--config", help="JSON file of option defaults; flags override it")

    parser = argparse.ArgumentParser(prog="itnkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"itnkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("augment", parents=[shared], help="generate spoken/written pairs from a corpus")
    p.add_argument("--input", help="UTF-8 corpus, one sentence per line")
    p.add_argument("--output", help="pair file (JSON Lines)")
    p.add_argument("--stats", help="stats JSON (default: OUTPUT.stats.json)")
    p.add_argument("--max-variants", type=int, default=16, help="variants per entity; 0 = unlimited")
    p.add_argument("--max-pairs", type=int, default=8, help="pairs per sentence with several entities")
    p.add_argument("--format", choices=("jsonl", "tsv"), default="jsonl",
                   help="pairs as JSON Lines, or spoken<TAB>written lines for trainers")
    p.add_argument("--classes", nargs="+", choices=[c.value for c in EntityClass],
                   help="entity classes to rewrite (default: all)")
    p.set_defaults(func=cmd_augment)
    subs["augment"] = p

    p = sub.add_parser("itn", parents=[shared], help="spoken-form text to written form, line by line")
    p.add_argument("--input", default="-")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_itn)
    subs["itn"] = p

    p = sub.add_parser("filter", parents=[shared], help="quality-filter translated pairs")
    p.add_argument("--source", help="English pair file with ids")
    p.add_argument("--translated", help="target-language pair file, same ids")
    p.add_argument("--output", help="kept pairs (JSON Lines)")
    p.add_argument("--report", help="FilterReport JSON (default: stdout)")
    p.add_argument("--wer-threshold", default="0", help="largest non-entity WER kept (default 0)")
    p.add_argument("--source-locale", default="en")
    p.set_defaults(func=cmd_filter)
    subs["filter"] = p

    p = sub.add_parser("evaluate", parents=[shared], help="normalized ITN accuracy")
    p.add_argument("--case", choices=("a", "b"))
    p.add_argument("--predictions")
    p.add_argument("--references")
    p.add_argument("--target-spoken", help="translated spoken inputs (case b)")
    p.add_argument("--source", help="source pair file for translation accuracy")
    p.add_argument("--translated", help="translated pair file for translation accuracy")
    p.add_argument("--non-itn", action="store_true", help="also report non-ITN accuracy (case a)")
    p.add_argument("--report", help="EvalReport JSON (default: stdout)")
    p.add_argument("--tsv", help="per-class table")
    p.add_argument("--source-locale", default="en")
    p.set_defaults(func=cmd_evaluate)
    subs["evaluate"] = p

    p = sub.add_parser("bridge-run", parents=[shared], help="run an external model over a file")
    p.add_argument("--spec", help="bridge spec JSON")
    p.add_argument("--input", help="text lines, or JSON Lines with id/text (.jsonl)")
    p.add_argument("--output")
    p.add_argument("--failed", help="failed-id sidecar (default: OUTPUT.failed.jsonl)")
    p.set_defaults(func=cmd_bridge_run)
    subs["bridge-run"] = p

    p = sub.add_parser("stats", parents=[shared], help="summarize a pair file")
    p.add_argument("--input")
    p.add_argument("--output", help="stats JSON (default: stdout)")
    p.set_defaults(func=cmd_stats)
    subs["stats"] = p
    return parser, subs


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    sub = subs[args.command]
    if args.config:
        try:
            config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read config {args.config}: {exc}")
        config = {k.replace("-", "_"): v for k, v in config.items()}
        unknown = sorted(set(config) - {a.dest for a in sub._actions})
        if unknown:
            parser.error(f"unknown keys in {args.config}: {', '.join(unknown)}")
        sub.set_defaults(**config)
        args = parser.parse_args(argv)
    missing = [a.option_strings[0] for a in sub._actions
               if a.dest in _REQUIRED.get(args.command, ()) and getattr(args, a.dest) is None]
    if missing:
        sub.error(f"missing required option(s): {', '.join(missing)}")
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    try:
        return args.func(args)
    except (ItnKitError, OSError, ValueError, KeyError) as exc:
        print(f"itnkit {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
