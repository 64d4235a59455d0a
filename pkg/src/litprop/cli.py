"""Command-line interface.

Subcommands mirror the pipeline stages so each can be run on its own
against a corpus directory of annotation bundles; ``run-all`` chains them
and writes a hashed manifest, and ``report`` summarizes a finished run.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import pipeline as pl
from .attribution import SIEVE_ORDER, SieveConfig, ablate, attribute_speakers, score_attribution
from .conversation import build_network, segment_dialogue_blocks
from .corpus import discover_bundles, load_book, validate
from .errors import LitpropError, MissingGold
from .lexicons import load_gender_lexicon, load_report_verbs, load_topic_lexicon
from .netmetrics import FEATURE_NAMES, all_features
from .propagation import detect_explicit, detect_implicit, sample_counterfactuals
from .quotation import identify_quotations, score_quotations, spans_from_gold
from .stats import (
    build_feature_matrix,
    fit_logistic,
    gender_triads,
    minmax_scale,
    randomization_test,
)
from .tuples import extract_tuples, filter_topic

log = logging.getLogger(__name__)


def _load_corpus(args, need_gold=False):
    bundles = discover_bundles(args.corpus_dir)
    if not bundles:
        raise LitpropError(f"no annotation bundles found under {args.corpus_dir}")
    for bundle in bundles:
        if need_gold and bundle["gold_quotes"] is None:
            raise MissingGold(f"{bundle['book_id']}: no gold quotes file")
        yield load_book(bundle["tokens"], bundle["mentions"], bundle["gold_quotes"], book_id=bundle["book_id"])


def _spans(book, args):
    if getattr(args, "gold_spans", False):
        if book.gold_quotes is None:
            raise MissingGold(f"{book.book_id}: --gold-spans needs a quotes file")
        return spans_from_gold(book)
    return identify_quotations(book)


def _sieve_config(args) -> SieveConfig:
    config = SieveConfig()
    for name in (getattr(args, "disable", "") or "").split(","):
        name = name.strip()
        if name:
            config = config.disable(name)
    return config


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit(rows, header, args, filename):
    if getattr(args, "out", None):
        path = _out_dir(args) / filename
        pl.write_csv(path, header, rows)
        print(f"wrote {path}")
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(pl._fmt(v) for v in row))


def cmd_ingest_validate(args) -> int:
    bundles = discover_bundles(args.corpus_dir)
    if not bundles:
        print(f"no annotation bundles found under {args.corpus_dir}", file=sys.stderr)
        return 1
    failures = 0
    for bundle in bundles:
        try:
            book = load_book(bundle["tokens"], bundle["mentions"], bundle["gold_quotes"], book_id=bundle["book_id"])
            problems = validate(book)
            status = "ok" if not problems else "; ".join(problems)
        except LitpropError as exc:
            status = f"error: {exc}"
        if status != "ok":
            failures += 1
        print(f"{bundle['book_id']}: {status}")
    return 0 if failures == 0 else 1


def cmd_quotes(args) -> int:
    rows = []
    for book in _load_corpus(args):
        spans = identify_quotations(book)
        if args.score:
            if book.gold_quotes is None:
                raise MissingGold(f"{book.book_id}: scoring needs gold quotes")
            s = score_quotations(spans, book.gold_quotes)
            rows.append(
                (book.book_id, s.precision, s.recall, s.f1, s.true_positives, s.false_positives, s.false_negatives)
            )
        else:
            out = _out_dir(args) if args.out else Path(".")
            path = out / f"{book.book_id}.quotes.jsonl"
            with open(path, "w", encoding="utf-8") as handle:
                for q in spans:
                    handle.write(
                        json.dumps({"quote_id": q.quote_id, "start_token": q.start_token, "end_token": q.end_token})
                        + "\n"
                    )
            print(f"wrote {path}")
    if args.score:
        _emit(rows, ("book_id", "precision", "recall", "f1", "tp", "fp", "fn"), args, "quote_scores.csv")
    return 0


def cmd_attribute(args) -> int:
    config = _sieve_config(args)
    if args.ablate:
        per_config: dict[str, list] = {}
        for book in _load_corpus(args, need_gold=True):
            spans = spans_from_gold(book)
            for label, score in ablate(book, spans, config).items():
                per_config.setdefault(label, []).append(score)
        rows = []
        for label in ["full"] + [f"-{name}" for name in SIEVE_ORDER]:
            scores = per_config[label]
            n = len(scores)
            b3 = sum(s.b3_f for s in scores) / n
            mucv = sum(s.muc_f for s in scores) / n
            ceaf = sum(s.ceaf_f for s in scores) / n
            avg = sum(s.average_f for s in scores) / n
            rows.append((label, b3, mucv, ceaf, avg))
        _emit(rows, ("configuration", "b3_f", "muc_f", "ceaf_f", "average_f"), args, "ablation.csv")
        return 0
    for book in _load_corpus(args):
        spans = _spans(book, args)
        attribution = attribute_speakers(book, spans, config)
        out = _out_dir(args) if args.out else Path(".")
        path = out / f"{book.book_id}.quotes.attrib.jsonl"
        with open(path, "w", encoding="utf-8") as handle:
            for q in spans:
                entry = attribution.entries[q.quote_id]
                handle.write(
                    json.dumps(
                        {
                            "quote_id": q.quote_id,
                            "start_token": q.start_token,
                            "end_token": q.end_token,
                            "speaker_entity_id": entry.speaker,
                            "sieve": entry.sieve,
                        }
                    )
                    + "\n"
                )
        print(f"wrote {path}")
    return 0


def cmd_score_attrib(args) -> int:
    rows = []
    totals = []
    for book in _load_corpus(args, need_gold=True):
        spans = spans_from_gold(book)
        attribution = attribute_speakers(book, spans, _sieve_config(args))
        score = score_attribution(book, spans, attribution)
        totals.append(score)
        rows.append(
            (book.book_id, score.b3_f, score.muc_f, score.ceaf_f, score.average_f)
        )
    n = len(totals)
    rows.append(
        (
            "corpus_average",
            sum(s.b3_f for s in totals) / n,
            sum(s.muc_f for s in totals) / n,
            sum(s.ceaf_f for s in totals) / n,
            sum(s.average_f for s in totals) / n,
        )
    )
    _emit(rows, ("book_id", "b3_f", "muc_f", "ceaf_f", "average_f"), args, "attribution_scores.csv")
    return 0


def cmd_network(args) -> int:
    for book in _load_corpus(args):
        spans = _spans(book, args)
        attribution = attribute_speakers(book, spans, _sieve_config(args))
        blocks = segment_dialogue_blocks(book, spans, attribution)
        net = build_network(book, blocks)
        out = _out_dir(args) if args.out else Path(".")
        pl.write_csv(out / f"{book.book_id}.network.csv", ("entity_a", "entity_b", "weight"), list(net.edges()))
        pl.write_csv(
            out / f"{book.book_id}.blocks.csv",
            ("block_id", "start_sentence", "end_sentence", "quote_ids", "co_present"),
            [
                (
                    b.block_id,
                    b.start_sentence,
                    b.end_sentence,
                    "|".join(str(q) for q in b.quote_ids),
                    "|".join(str(e) for e in sorted(b.co_present_entities)),
                )
                for b in blocks
            ],
        )
        print(f"wrote {out / book.book_id}.network.csv and .blocks.csv")
    return 0


def cmd_tuples(args) -> int:
    lexicon = load_topic_lexicon(args.lexicon)
    rows = []
    for book in _load_corpus(args):
        spans = _spans(book, args)
        attribution = attribute_speakers(book, spans, _sieve_config(args))
        tuples_all = extract_tuples(book, spans, attribution)
        topical = {id(t) for t in filter_topic(tuples_all, lexicon)}
        for t in tuples_all:
            rows.append(
                (
                    book.book_id,
                    t.source_quote_id,
                    t.source_block_id,
                    "" if t.speaker_entity_id is None else t.speaker_entity_id,
                    pl._slot_csv(t.subject),
                    t.verb,
                    pl._slot_csv(t.object),
                    int(id(t) in topical),
                )
            )
    _emit(rows, ("book_id", "quote_id", "block_id", "speaker", "subject", "verb", "object", "topical"), args, "tuples.csv")
    return 0


def cmd_propagate(args) -> int:
    lexicon = load_topic_lexicon(args.lexicon)
    rows = []
    detected: dict[str, dict[str, list]] = {}
    for book in _load_corpus(args):
        spans = _spans(book, args)
        attribution = attribute_speakers(book, spans, _sieve_config(args))
        blocks = segment_dialogue_blocks(book, spans, attribution)
        record = detected.setdefault(book.book_id, {"implicit": [], "explicit": []})
        if args.mode in ("implicit", "both"):
            topic = filter_topic(extract_tuples(book, spans, attribution, blocks), lexicon)
            events = detect_implicit(book, blocks, topic)
            record["implicit"] = events
            for e in events:
                rows.append(
                    (
                        book.book_id,
                        "implicit",
                        e.a_entity,
                        e.b_entity,
                        str(e.c_entity),
                        pl._slot_csv(e.tuple_key[0]),
                        e.tuple_key[1],
                        pl._slot_csv(e.tuple_key[2]),
                        e.origin_block_id,
                        e.repeat_block_id,
                    )
                )
            if args.pairs:
                pairs = sample_counterfactuals(events, blocks, attribution, pl.book_seed(args.seed, book.book_id))
                for p in pairs:
                    rows.append((book.book_id, "pair", p.b_entity, p.b_prime_entity, "", "", "", "", "", p.event_index))
        if args.mode in ("explicit", "both"):
            events = detect_explicit(book, spans, attribution, blocks)
            record["explicit"] = events
            for e in events:
                rows.append(
                    (
                        book.book_id,
                        "explicit",
                        e.a_entity,
                        e.b_entity,
                        "|".join(str(c) for c in e.c_entities),
                        "",
                        e.verb,
                        "",
                        e.quote_id,
                        "",
                    )
                )
    _emit(
        rows,
        ("book_id", "kind", "a", "b", "c", "subject", "verb", "object", "origin_or_quote", "repeat_or_event"),
        args,
        "propagation.csv",
    )
    if args.check:
        return _check_against_manifest(args.check, detected)
    return 0


def _check_against_manifest(manifest_path, detected) -> int:
    with open(manifest_path, encoding="utf-8") as handle:
        manifest = json.load(handle)
    ok = True
    for kind in ("implicit", "explicit"):
        expected = set()
        for book_id, record in manifest["books"].items():
            for plant in record[kind]:
                if kind == "implicit":
                    expected.add(
                        (book_id, plant["a"], plant["b"], plant["c"], plant["verb"], plant["origin_block"], plant["repeat_block"])
                    )
                else:
                    expected.add((book_id, plant["a"], plant["b"], tuple(plant["listeners"]), plant["quote_id"]))
        found = set()
        for book_id, record in detected.items():
            for e in record[kind]:
                if kind == "implicit":
                    found.add((book_id, e.a_entity, e.b_entity, e.c_entity, e.tuple_key[1], e.origin_block_id, e.repeat_block_id))
                else:
                    found.add((book_id, e.a_entity, e.b_entity, tuple(e.c_entities), e.quote_id))
        tp = len(expected & found)
        precision = tp / len(found) if found else 0.0
        recall = tp / len(expected) if expected else 0.0
        print(f"{kind}: precision={precision:.4f} recall={recall:.4f} ({tp}/{len(found)} found, {len(expected)} planted)")
        ok = ok and precision == 1.0 and recall == 1.0
    return 0 if ok else 1


def cmd_features(args) -> int:
    labels: dict[tuple[str, int], int] = {}
    if args.pairs_csv:
        import csv as _csv

        with open(args.pairs_csv, encoding="utf-8", newline="") as handle:
            for row in _csv.DictReader(handle):
                labels[(row["book_id"], int(row["b"]))] = 1
                labels[(row["book_id"], int(row["b_prime"]))] = 0
    rows = []
    for book in _load_corpus(args):
        spans = _spans(book, args)
        attribution = attribute_speakers(book, spans, _sieve_config(args))
        blocks = segment_dialogue_blocks(book, spans, attribution)
        net = build_network(book, blocks)
        features = all_features(net, args.closeness)
        for v in net.nodes():
            label = labels.get((book.book_id, v), "")
            rows.append((book.book_id, v, net.degree(v)) + features[v].as_row() + (label,))
    _emit(rows, ("book_id", "entity_id", "degree") + FEATURE_NAMES + ("propagating",), args, "features.csv")
    return 0


def _networks_with_pairs(args):
    lexicon = load_topic_lexicon(args.lexicon)
    out = []
    per_book = []
    for book in _load_corpus(args):
        spans = _spans(book, args)
        attribution = attribute_speakers(book, spans, _sieve_config(args))
        blocks = segment_dialogue_blocks(book, spans, attribution)
        net = build_network(book, blocks)
        topic = filter_topic(extract_tuples(book, spans, attribution, blocks), lexicon)
        events = detect_implicit(book, blocks, topic)
        pairs = sample_counterfactuals(events, blocks, attribution, pl.book_seed(args.seed, book.book_id))
        explicit = detect_explicit(book, spans, attribution, blocks)
        per_book.append((book, net, explicit))
        if pairs:
            out.append((book.book_id, net, [(p.b_entity, p.b_prime_entity) for p in pairs]))
    return out, per_book


def cmd_regress(args) -> int:
    networks, _ = _networks_with_pairs(args)
    if not networks:
        print("no counterfactual pairs in this corpus", file=sys.stderr)
        return 1
    fit = fit_logistic(minmax_scale(build_feature_matrix(networks, args.closeness)))
    rows = [
        (
            name,
            float(fit.coefficients[i]),
            "" if fit.standard_errors is None else float(fit.standard_errors[i]),
            "" if fit.p_values is None else float(fit.p_values[i]),
            "" if fit.p_values is None else int(fit.p_values[i] < 0.01),
        )
        for i, name in enumerate(fit.feature_names)
    ]
    rows.append(("intercept", fit.intercept, "", "", ""))
    _emit(rows, ("feature", "coefficient", "std_error", "p_value", "significant_0.01"), args, "regression.csv")
    if fit.separation:
        print("warning: fit flagged as separated; coefficients unreliable", file=sys.stderr)
    return 0


def cmd_randomize(args) -> int:
    networks, _ = _networks_with_pairs(args)
    if not networks:
        print("no counterfactual pairs in this corpus", file=sys.stderr)
        return 1
    null = randomization_test(
        networks,
        trials=args.trials,
        graphs_per_network=args.graphs_per_net,
        seed=args.seed,
        closeness_variant=args.closeness,
    )
    rows = [
        (name, float(null.observed[i]), float(null.p_values[i]), args.trials, null.redrawn_trials)
        for i, name in enumerate(null.feature_names)
    ]
    _emit(rows, ("feature", "observed", "empirical_p", "trials", "redrawn"), args, "randomization.csv")
    return 0


def cmd_gender(args) -> int:
    _, per_book = _networks_with_pairs(args)
    report = gender_triads(per_book, load_gender_lexicon())
    rows = [
        (
            "-".join(config),
            report.structural_proportions[config],
            report.structural_halfwidths[config],
            report.propagating_proportions[config],
            report.propagating_halfwidths[config],
            report.structural_n,
            report.propagating_n,
        )
        for config in report.configurations
    ]
    _emit(
        rows,
        (
            "configuration",
            "structural_proportion",
            "structural_halfwidth",
            "propagating_proportion",
            "propagating_halfwidth",
            "structural_n",
            "propagating_n",
        ),
        args,
        "gender.csv",
    )
    if args.plot:
        from .plots import gender_bar_svg

        out = _out_dir(args) if args.out else Path(".")
        path = out / "gender.svg"
        path.write_text(gender_bar_svg(report), encoding="utf-8")
        print(f"wrote {path}")
    return 0


def cmd_run_all(args) -> int:
    config = _pipeline_config(args)
    manifest = pl.run_pipeline(config)
    print(f"wrote {Path(config.out_dir) / 'manifest.json'} ({len(manifest['files'])} files)")
    failed = [b for b, status in manifest["books"].items() if status != "ok"]
    for book_id in failed:
        print(f"book failed: {book_id}: {manifest['books'][book_id]}", file=sys.stderr)
    return 0


def cmd_report(args) -> int:
    text = pl.report(args.manifest)
    print(text, end="")
    return 0


def _pipeline_config(args) -> pl.PipelineConfig:
    overrides = dict(
        corpus_dir=Path(args.corpus_dir),
        out_dir=Path(args.out or "out"),
        seed=args.seed,
        jobs=args.jobs,
        trials=args.trials,
        graphs_per_network=args.graphs_per_net,
        sieves=_sieve_config(args),
        topic_lexicon_path=args.lexicon,
        use_gold_spans=getattr(args, "gold_spans", False),
        make_plots=args.plot,
    )
    if args.config:
        return pl.PipelineConfig.from_file(args.config, **overrides)
    return pl.PipelineConfig(**overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="litprop", description="Information propagation in annotated literary texts")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, gold_spans=True, lexicon=False, seed=False):
        p.add_argument("corpus_dir", help="directory of annotation bundles")
        p.add_argument("--out", default=None, help="output directory (default: print CSV to stdout)")
        p.add_argument("--disable", default="", help="comma-separated sieves to disable")
        p.add_argument("--closeness", default="average_inverse", choices=("average_inverse", "classic"))
        if gold_spans:
            p.add_argument("--gold-spans", action="store_true", dest="gold_spans", help="use gold quote boundaries")
        if lexicon:
            p.add_argument("--lexicon", default=None, help="topic lexicon override file")
        if seed:
            p.add_argument("--seed", type=int, default=7)

    p = sub.add_parser("ingest-validate", help="load every bundle and report violations")
    p.add_argument("corpus_dir")
    p.set_defaults(func=cmd_ingest_validate)

    p = sub.add_parser("quotes", help="identify quotation spans")
    common(p, gold_spans=False)
    p.add_argument("--score", action="store_true", help="score against gold spans instead of emitting jsonl")
    p.set_defaults(func=cmd_quotes)

    p = sub.add_parser("attribute", help="attribute speakers to quotes")
    common(p)
    p.add_argument("--ablate", action="store_true", help="emit the per-sieve ablation table")
    p.set_defaults(func=cmd_attribute)

    p = sub.add_parser("score-attrib", help="cluster-overlap scores per book")
    common(p)
    p.set_defaults(func=cmd_score_attrib)

    p = sub.add_parser("network", help="dialogue blocks and co-presence network")
    common(p)
    p.set_defaults(func=cmd_network)

    p = sub.add_parser("tuples", help="propositional tuples from quoted speech")
    common(p, lexicon=True)
    p.set_defaults(func=cmd_tuples)

    p = sub.add_parser("propagate", help="implicit/explicit propagation events")
    common(p, lexicon=True, seed=True)
    p.add_argument("--mode", choices=("implicit", "explicit", "both"), default="both")
    p.add_argument("--pairs", action="store_true", help="also sample counterfactual pairs")
    p.add_argument("--check", default=None, help="compare against a plant manifest")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("features", help="six node measures per character")
    common(p)
    p.add_argument("--pairs-csv", default=None, help="CSV with book_id,b,b_prime for labels")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("regress", help="logistic regression on B vs B' features")
    common(p, lexicon=True, seed=True)
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser("randomize", help="degree-preserving randomization test")
    common(p, lexicon=True, seed=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--graphs-per-net", type=int, default=10)
    p.set_defaults(func=cmd_randomize)

    p = sub.add_parser("gender", help="gender-triad proportions")
    common(p, lexicon=True, seed=True)
    p.add_argument("--plot", action="store_true", help="also write a grouped-bar SVG")
    p.set_defaults(func=cmd_gender)

    p = sub.add_parser("run-all", help="full pipeline with manifest")
    common(p, lexicon=True, seed=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--graphs-per-net", type=int, default=10)
    p.add_argument("--plot", action="store_true")
    p.add_argument("--config", default=None, help="key = value config file with sections")
    p.set_defaults(func=cmd_run_all)

    p = sub.add_parser("report", help="summarize a finished run")
    p.add_argument("manifest", help="path to manifest.json")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except LitpropError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
