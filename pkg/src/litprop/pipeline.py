"""Corpus-level orchestration: run every stage per book, aggregate the
corpus statistics, and write deterministic CSV/JSON artifacts.

All randomness flows from one master seed. Per-book seeds derive from
sha256(f"{seed}:counterfactual:{book_id}") so results do not depend on
worker scheduling; corpus-level stages use the master seed directly.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import attribution as attribution_mod
from .attribution import SieveConfig, attribute_speakers
from .conversation import build_network, segment_dialogue_blocks
from .corpus import discover_bundles, load_book
from .errors import LitpropError, StageError
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


@dataclass
class PipelineConfig:
    corpus_dir: Path
    out_dir: Path
    seed: int = 7
    jobs: int = 1
    trials: int = 10_000
    graphs_per_network: int = 10
    sieves: SieveConfig = field(default_factory=SieveConfig)
    topic_lexicon_path: Optional[Path] = None
    report_verbs_path: Optional[Path] = None
    gender_words_path: Optional[Path] = None
    closeness_variant: str = "average_inverse"
    use_gold_spans: bool = False
    make_plots: bool = False

    @classmethod
    def from_file(cls, path, **overrides) -> "PipelineConfig":
        import configparser

        parser = configparser.ConfigParser()
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
        values: dict = {}
        if parser.has_section("corpus"):
            if parser.has_option("corpus", "dir"):
                values["corpus_dir"] = Path(parser.get("corpus", "dir"))
            if parser.has_option("corpus", "out"):
                values["out_dir"] = Path(parser.get("corpus", "out"))
        if parser.has_section("random"):
            for name, caster in (("seed", int), ("trials", int), ("graphs_per_network", int)):
                if parser.has_option("random", name):
                    values[name] = caster(parser.get("random", name))
        if parser.has_section("run"):
            if parser.has_option("run", "jobs"):
                values["jobs"] = parser.getint("run", "jobs")
            if parser.has_option("run", "use_gold_spans"):
                values["use_gold_spans"] = parser.getboolean("run", "use_gold_spans")
        if parser.has_section("lexicons"):
            for key, attr in (
                ("topics", "topic_lexicon_path"),
                ("report_verbs", "report_verbs_path"),
                ("gender_words", "gender_words_path"),
            ):
                if parser.has_option("lexicons", key):
                    values[attr] = Path(parser.get("lexicons", key))
        if parser.has_section("attribution") and parser.has_option("attribution", "disable"):
            config = SieveConfig()
            for name in parser.get("attribution", "disable").split(","):
                name = name.strip()
                if name:
                    config = config.disable(name)
            values["sieves"] = config
        values.update(overrides)
        return cls(**values)


def book_seed(master_seed: int, book_id: str, stage: str = "counterfactual") -> int:
    digest = hashlib.sha256(f"{master_seed}:{stage}:{book_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _slot_csv(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return f"ent:{value}"
    return f"nom:{value}"


@dataclass
class BookResult:
    book_id: str
    ok: bool
    error: str = ""
    quote_count: int = 0
    block_count: int = 0
    tuple_count: int = 0
    topic_tuple_count: int = 0
    implicit_events: int = 0
    explicit_events: int = 0
    explicit_triads: int = 0
    pairs: list = field(default_factory=list)  # (b, b_prime)
    network: object = None
    book: object = None
    explicit: object = None


def process_book(bundle: dict, config: PipelineConfig) -> BookResult:
    """Every per-book stage; artifacts written under out/books/<book_id>/."""
    book_id = bundle["book_id"]
    out = Path(config.out_dir) / "books" / book_id
    out.mkdir(parents=True, exist_ok=True)

    book = load_book(bundle["tokens"], bundle["mentions"], bundle["gold_quotes"], book_id=book_id)
    if config.use_gold_spans and book.gold_quotes is not None:
        quotes = spans_from_gold(book)
    else:
        quotes = identify_quotations(book)

    with open(out / "quotes.pred.jsonl", "w", encoding="utf-8") as handle:
        for q in quotes:
            handle.write(
                json.dumps({"quote_id": q.quote_id, "start_token": q.start_token, "end_token": q.end_token}) + "\n"
            )

    attribution = attribute_speakers(book, quotes, config.sieves)
    with open(out / "quotes.attrib.jsonl", "w", encoding="utf-8") as handle:
        for q in quotes:
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

    gender_lex = load_gender_lexicon(config.gender_words_path)
    blocks = segment_dialogue_blocks(book, quotes, attribution, gender_lex)
    write_csv(
        out / "blocks.csv",
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

    network = build_network(book, blocks)
    write_csv(out / "network.csv", ("entity_a", "entity_b", "weight"), list(network.edges()))

    tuples_all = extract_tuples(book, quotes, attribution, blocks)
    topic = filter_topic(tuples_all, load_topic_lexicon(config.topic_lexicon_path))
    topic_ids = {id(t) for t in topic}
    write_csv(
        out / "tuples.csv",
        ("quote_id", "block_id", "speaker", "subject", "verb", "object", "topical"),
        [
            (
                t.source_quote_id,
                t.source_block_id,
                "" if t.speaker_entity_id is None else t.speaker_entity_id,
                _slot_csv(t.subject),
                t.verb,
                _slot_csv(t.object),
                int(id(t) in topic_ids),
            )
            for t in tuples_all
        ],
    )

    implicit = detect_implicit(book, blocks, topic)
    write_csv(
        out / "implicit_events.csv",
        ("a", "b", "c", "subject", "verb", "object", "origin_block", "repeat_block"),
        [
            (
                e.a_entity,
                e.b_entity,
                e.c_entity,
                _slot_csv(e.tuple_key[0]),
                e.tuple_key[1],
                _slot_csv(e.tuple_key[2]),
                e.origin_block_id,
                e.repeat_block_id,
            )
            for e in implicit
        ],
    )

    explicit = detect_explicit(book, quotes, attribution, blocks, load_report_verbs(config.report_verbs_path))
    write_csv(
        out / "explicit_events.csv",
        ("a", "b", "listeners", "quote_id", "verb"),
        [(e.a_entity, e.b_entity, "|".join(str(c) for c in e.c_entities), e.quote_id, e.verb) for e in explicit],
    )

    pairs_list = sample_counterfactuals(implicit, blocks, attribution, book_seed(config.seed, book_id))
    write_csv(
        out / "counterfactual_pairs.csv",
        ("b", "b_prime", "event_index"),
        [(p.b_entity, p.b_prime_entity, p.event_index) for p in pairs_list],
    )

    return BookResult(
        book_id=book_id,
        ok=True,
        quote_count=len(quotes),
        block_count=len(blocks),
        tuple_count=len(tuples_all),
        topic_tuple_count=len(topic),
        implicit_events=len(implicit),
        explicit_events=len(explicit),
        explicit_triads=sum(len(e.c_entities) for e in explicit),
        pairs=[(p.b_entity, p.b_prime_entity) for p in pairs_list],
        network=network,
        book=book,
        explicit=explicit,
    )


def _safe_process(bundle: dict, config: PipelineConfig) -> BookResult:
    try:
        return process_book(bundle, config)
    except Exception as exc:  # crash isolation: one bad book never aborts the run
        log.error("book %s failed: %s", bundle["book_id"], exc)
        return BookResult(book_id=bundle["book_id"], ok=False, error=str(exc))


def run_pipeline(config: PipelineConfig) -> dict:
    """Run everything; returns (and writes) the run manifest."""
    bundles = discover_bundles(config.corpus_dir)
    if not bundles:
        raise LitpropError(f"no annotation bundles found under {config.corpus_dir}")
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_safe_process, bundles, [config] * len(bundles)))
    else:
        results = [_safe_process(bundle, config) for bundle in bundles]
    results.sort(key=lambda r: r.book_id)
    succeeded = [r for r in results if r.ok]
    if not succeeded:
        raise LitpropError("every book failed; nothing to aggregate")

    corpus_out = out / "corpus"
    corpus_out.mkdir(exist_ok=True)
    stages: dict[str, str] = {}

    write_csv(
        corpus_out / "books.csv",
        (
            "book_id",
            "status",
            "quotes",
            "blocks",
            "tuples",
            "topic_tuples",
            "implicit_events",
            "explicit_events",
            "explicit_triads",
        ),
        [
            (
                r.book_id,
                "ok" if r.ok else f"failed: {r.error}",
                r.quote_count,
                r.block_count,
                r.tuple_count,
                r.topic_tuple_count,
                r.implicit_events,
                r.explicit_events,
                r.explicit_triads,
            )
            for r in results
        ],
    )
    stages["books"] = "ok"

    networks_with_pairs = [(r.book_id, r.network, r.pairs) for r in succeeded if r.pairs]
    if networks_with_pairs:
        try:
            matrix = build_feature_matrix(networks_with_pairs, config.closeness_variant)
            rows = []
            for (book_id, entity, event_id), label, values in zip(matrix.provenance, matrix.labels, matrix.values):
                rows.append((book_id, entity, event_id, int(label)) + tuple(float(v) for v in values))
            write_csv(
                corpus_out / "feature_matrix.csv",
                ("book_id", "entity_id", "event_id", "label") + FEATURE_NAMES,
                rows,
            )
            stages["features"] = "ok"
        except LitpropError as exc:
            stages["features"] = f"failed: {exc}"
            matrix = None

        if matrix is not None:
            try:
                fit = fit_logistic(minmax_scale(matrix))
                write_csv(
                    corpus_out / "regression.csv",
                    ("feature", "coefficient", "std_error", "p_value", "significant_0.01"),
                    [
                        (
                            name,
                            float(fit.coefficients[i]),
                            "" if fit.standard_errors is None else float(fit.standard_errors[i]),
                            "" if fit.p_values is None else float(fit.p_values[i]),
                            "" if fit.p_values is None else int(fit.p_values[i] < 0.01),
                        )
                        for i, name in enumerate(fit.feature_names)
                    ]
                    + [("intercept", fit.intercept, "", "", "")],
                )
                stages["regression"] = "ok" if fit.converged else "separation_flagged"
            except (LitpropError, ValueError) as exc:
                stages["regression"] = f"failed: {exc}"

            try:
                null = randomization_test(
                    networks_with_pairs,
                    trials=config.trials,
                    graphs_per_network=config.graphs_per_network,
                    seed=config.seed,
                    closeness_variant=config.closeness_variant,
                )
                write_csv(
                    corpus_out / "randomization.csv",
                    ("feature", "observed", "empirical_p", "trials", "redrawn"),
                    [
                        (name, float(null.observed[i]), float(null.p_values[i]), config.trials, null.redrawn_trials)
                        for i, name in enumerate(null.feature_names)
                    ],
                )
                stages["randomization"] = "ok"
            except LitpropError as exc:
                stages["randomization"] = f"failed: {exc}"
    else:
        stages["features"] = "skipped: no counterfactual pairs"
        stages["regression"] = "skipped: no counterfactual pairs"
        stages["randomization"] = "skipped: no counterfactual pairs"

    report_data = gender_triads(
        [(r.book, r.network, r.explicit) for r in succeeded],
        load_gender_lexicon(config.gender_words_path),
    )
    write_csv(
        corpus_out / "gender.csv",
        (
            "configuration",
            "structural_proportion",
            "structural_halfwidth",
            "propagating_proportion",
            "propagating_halfwidth",
            "structural_n",
            "propagating_n",
        ),
        [
            (
                "-".join(config_),
                report_data.structural_proportions[config_],
                report_data.structural_halfwidths[config_],
                report_data.propagating_proportions[config_],
                report_data.propagating_halfwidths[config_],
                report_data.structural_n,
                report_data.propagating_n,
            )
            for config_ in report_data.configurations
        ],
    )
    stages["gender"] = "ok"
    if config.make_plots:
        from .plots import gender_bar_svg

        (corpus_out / "gender.svg").write_text(gender_bar_svg(report_data), encoding="utf-8")
        stages["gender_plot"] = "ok"

    manifest = {
        "seed": config.seed,
        "corpus_dir": str(config.corpus_dir),
        "books": {r.book_id: ("ok" if r.ok else r.error) for r in results},
        "stages": stages,
        "files": {},
    }
    for path in sorted(out.rglob("*")):
        if path.is_file() and path.name != "manifest.json":
            digest = hashlib.sha256(path.read_bytes()).hexdigest()
            manifest["files"][str(path.relative_to(out))] = digest
    with open(out / "manifest.json", "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return manifest


def report(manifest_path) -> str:
    """Human-readable summary next to a machine-readable CSV."""
    manifest_path = Path(manifest_path)
    with open(manifest_path, encoding="utf-8") as handle:
        manifest = json.load(handle)
    out = manifest_path.parent
    lines = ["run summary", "==========="]
    missing = [name for name, status in manifest["stages"].items() if status != "ok"]
    book_rows = []
    books_csv = out / "corpus" / "books.csv"
    if books_csv.exists():
        with open(books_csv, encoding="utf-8", newline="") as handle:
            book_rows = list(csv.DictReader(handle))
    ok_rows = [r for r in book_rows if r["status"] == "ok"]
    with_implicit = [r for r in ok_rows if int(r["implicit_events"]) > 0]
    implicit_total = sum(int(r["implicit_events"]) for r in ok_rows)
    explicit_total = sum(int(r["explicit_events"]) for r in ok_rows)
    triad_total = sum(int(r["explicit_triads"]) for r in ok_rows)
    lines.append(f"books processed: {len(ok_rows)} of {len(book_rows)}")
    if ok_rows:
        share = len(with_implicit) / len(ok_rows)
        lines.append(f"books with at least one implicit event: {len(with_implicit)} ({share:.1%})")
    lines.append(f"implicit events: {implicit_total}")
    lines.append(f"explicit events: {explicit_total} ({triad_total} triads)")

    regression_csv = out / "corpus" / "regression.csv"
    if regression_csv.exists():
        lines.append("")
        lines.append("coefficients (scaled features):")
        with open(regression_csv, encoding="utf-8", newline="") as handle:
            for row in csv.DictReader(handle):
                star = " *" if row["significant_0.01"] == "1" else ""
                lines.append(f"  {row['feature']:<22} {row['coefficient']}{star}")

    randomization_csv = out / "corpus" / "randomization.csv"
    if randomization_csv.exists():
        lines.append("")
        lines.append("randomization-test empirical p-values:")
        with open(randomization_csv, encoding="utf-8", newline="") as handle:
            for row in csv.DictReader(handle):
                lines.append(f"  {row['feature']:<22} {row['empirical_p']}")

    gender_csv = out / "corpus" / "gender.csv"
    if gender_csv.exists():
        lines.append("")
        lines.append("gender triads (structural vs propagating proportions):")
        with open(gender_csv, encoding="utf-8", newline="") as handle:
            for row in csv.DictReader(handle):
                lines.append(
                    f"  {row['configuration']}: {row['structural_proportion']} vs {row['propagating_proportion']}"
                )

    if missing:
        lines.append("")
        for name in missing:
            lines.append(f"MissingStage: {name} ({manifest['stages'][name]})")
    text = "\n".join(lines) + "\n"
    (out / "report.txt").write_text(text, encoding="utf-8")
    write_csv(
        out / "report.csv",
        ("metric", "value"),
        [
            ("books_ok", len(ok_rows)),
            ("books_total", len(book_rows)),
            ("books_with_implicit", len(with_implicit)),
            ("implicit_events", implicit_total),
            ("explicit_events", explicit_total),
            ("explicit_triads", triad_total),
        ],
    )
    return text
