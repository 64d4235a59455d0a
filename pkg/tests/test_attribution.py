import pytest

from litprop.attribution import (
    SIEVE_ORDER,
    SieveConfig,
    ablate,
    attribute_speakers,
    attribution_clusterings,
    score_attribution,
)
from litprop.corpus import AnnotatedBook, GoldQuote, Mention, Token, load_book
from litprop.errors import MissingGold
from litprop.quotation import identify_quotations, spans_from_gold

from conftest import SYNTHETIC_CORPUS


def build_book(sentences, gold=None):
    """sentences: (paragraph_id, words, mentions) where words are
    (surface, lemma, upos, head_local, rel) and mentions (start, end, entity)."""
    tokens = []
    mentions = []
    for sentence_id, (paragraph_id, words, sent_mentions) in enumerate(sentences):
        base = len(tokens)
        for i, (surface, lemma, upos, head_local, rel) in enumerate(words):
            tokens.append(
                Token(
                    token_id=base + i,
                    sentence_id=sentence_id,
                    paragraph_id=paragraph_id,
                    surface=surface,
                    lemma=lemma,
                    upos=upos,
                    head=None if head_local is None else base + head_local,
                    dep_rel=rel,
                )
            )
        for start, end, entity in sent_mentions:
            mentions.append(
                Mention(
                    mention_id=len(mentions),
                    start_token=base + start,
                    end_token=base + end,
                    entity_id=entity,
                    text=" ".join(w[0] for w in words[start : end + 1]),
                )
            )
    return AnnotatedBook("attr", tuple(tokens), tuple(mentions), gold)


def q(*inner):
    """Quote sentence fragment: delimiters around inner words."""
    return [('"', '"', "PUNCT", None, "punct")] + list(inner) + [('"', '"', "PUNCT", None, "punct")]


W = lambda s, lemma=None, upos="NOUN", head=None, rel="dep": (s, lemma or s.lower(), upos, head, rel)


def attribute(book, **config):
    quotes = identify_quotations(book)
    return quotes, attribute_speakers(book, quotes, SieveConfig(**config))


def test_trigram_trailing_said_name():
    book = build_book(
        [
            (
                0,
                q(W("Hello", upos="INTJ")) + [W("said", "say", "VERB"), W("Jane", upos="PROPN"), W(".", upos="PUNCT")],
                [(4, 4, 7)],
            )
        ]
    )
    quotes, attribution = attribute(book)
    assert attribution.speaker_of(0) == 7
    assert attribution.sieve_of(0) == "trigram_matching"


def test_trigram_leading_name_said_with_comma():
    book = build_book(
        [
            (
                0,
                [W("Jane", upos="PROPN"), W("said", "say", "VERB"), W(",", upos="PUNCT")] + q(W("Hello", upos="INTJ")),
                [(0, 0, 7)],
            )
        ]
    )
    quotes, attribution = attribute(book)
    assert attribution.speaker_of(0) == 7
    assert attribution.sieve_of(0) == "trigram_matching"


def test_trigram_name_said_after_quote():
    book = build_book(
        [(0, q(W("Oh", upos="INTJ")) + [W("Jane", upos="PROPN"), W("whispered", "whisper", "VERB")], [(3, 3, 7)])]
    )
    quotes, attribution = attribute(book)
    assert attribution.speaker_of(0) == 7
    assert attribution.sieve_of(0) == "trigram_matching"


def dependency_book():
    # " Hello " Jane softly said .  (verb two tokens away: trigram misses)
    words = q(W("Hello", upos="INTJ")) + [
        W("Jane", upos="PROPN", head=5, rel="nsubj"),
        W("softly", upos="ADV", head=5, rel="advmod"),
        ("said", "say", "VERB", None, "root"),
        W(".", upos="PUNCT"),
    ]
    return build_book([(0, words, [(3, 3, 7)])])


def test_dependency_sieve_finds_nsubj_of_comm_verb():
    book = dependency_book()
    quotes, attribution = attribute(book)
    assert attribution.speaker_of(0) == 7
    assert attribution.sieve_of(0) == "dependency_parses"


def test_dependency_sieve_can_be_disabled():
    book = dependency_book()
    quotes, attribution = attribute(book, dependency_parses=False)
    assert attribution.sieve_of(0) != "dependency_parses"


def test_vocative_names_next_speaker():
    # "I say , Elizabeth . " then a bare reply quote in the same block
    first = q(
        W("I", "i", "PRON"),
        W("say", "say", "VERB"),
        W(",", upos="PUNCT"),
        W("Elizabeth", upos="PROPN"),
        W(".", upos="PUNCT"),
    )
    second = q(W("Indeed", upos="INTJ"))
    book = build_book([(0, first, [(4, 4, 3)]), (1, second, [])])
    quotes, attribution = attribute(book)
    assert attribution.speaker_of(1) == 3
    assert attribution.sieve_of(1) == "vocatives"


def test_paragraph_final_mention_binds_quote():
    words = q(W("Well", upos="INTJ")) + [
        W("thought", "think", "VERB"),
        W("Jane", upos="PROPN"),
    ]
    book = build_book([(0, words, [(4, 4, 7)])])
    quotes, attribution = attribute(book)
    assert attribution.speaker_of(0) == 7
    assert attribution.sieve_of(0) == "paragraph_final_mention_linking"


def test_singleton_candidate_in_gap():
    sentences = [
        (0, [W("Jane", upos="PROPN"), W("rose", "rise", "VERB"), W("slowly"), W(".", upos="PUNCT")], [(0, 0, 7)]),
        (0, q(W("Hello", upos="INTJ")), []),
    ]
    book = build_book(sentences)
    quotes, attribution = attribute(book)
    assert attribution.speaker_of(0) == 7
    assert attribution.sieve_of(0) == "singleton_mention_detection"


def conversational_book():
    def tagged(name, entity):
        words = q(W("Hm", upos="INTJ")) + [W("said", "say", "VERB"), W(name, upos="PROPN"), W(".", upos="PUNCT")]
        return (None, words, [(4, 4, entity)])

    sentences = [
        tagged("Anna", 1),
        tagged("Ben", 2),
        (None, q(W("More", upos="ADV")), []),
        (None, q(W("Again", upos="ADV")), []),
    ]
    sentences = [(i, words, mentions) for i, (_, words, mentions) in enumerate(sentences)]
    return build_book(sentences)


def test_conversational_alternation():
    book = conversational_book()
    quotes, attribution = attribute(book)
    assert attribution.speaker_of(2) == 1  # other(Ben)
    assert attribution.speaker_of(3) == 2
    assert attribution.sieve_of(2) == "conversational_pattern"


def test_majority_fallback_three_speakers():
    def tagged(name, entity):
        words = q(W("Hm", upos="INTJ")) + [W("said", "say", "VERB"), W(name, upos="PROPN"), W(".", upos="PUNCT")]
        return (words, [(4, 4, entity)])

    rows = [tagged("Anna", 1), tagged("Ben", 2), tagged("Anna", 1), tagged("Cara", 3)]
    sentences = [(i, words, mentions) for i, (words, mentions) in enumerate(rows)]
    sentences.append((len(sentences), q(W("More", upos="ADV")), []))
    book = build_book(sentences)
    quotes, attribution = attribute(book)
    assert attribution.speaker_of(4) == 1  # Anna has the majority in the block
    assert attribution.sieve_of(4) == "majority_fallback"


def test_unattributed_without_fallback():
    book = build_book([(0, q(W("Hello", upos="INTJ")), [])])
    quotes, attribution = attribute(book, fallback_majority=False)
    assert attribution.speaker_of(0) is None
    assert attribution.sieve_of(0) == "none"


def test_every_quote_attributed_with_fallback_and_any_mention():
    sentences = [
        (0, [W("Jane", upos="PROPN"), W("waited", "wait", "VERB"), W(".", upos="PUNCT")], [(0, 0, 7)]),
        (1, q(W("One", upos="NUM")), []),
        (2, q(W("Two", upos="NUM")), []),
    ]
    book = build_book(sentences)
    quotes, attribution = attribute(book)
    assert all(attribution.speaker_of(i) == 7 for i in range(len(quotes)))


def test_determinism():
    book = conversational_book()
    quotes = identify_quotations(book)
    first = attribute_speakers(book, quotes)
    second = attribute_speakers(book, quotes)
    assert first == second


def test_sieve_counts_partition_quotes():
    book = conversational_book()
    quotes, attribution = attribute(book)
    assert sum(attribution.sieve_counts().values()) == len(quotes)


def test_disabling_a_sieve_never_affects_earlier_sieves():
    book = conversational_book()
    quotes = identify_quotations(book)
    full = attribute_speakers(book, quotes, SieveConfig())
    for name in SIEVE_ORDER:
        partial = attribute_speakers(book, quotes, SieveConfig().disable(name))
        order_index = SIEVE_ORDER.index(name)
        for earlier in SIEVE_ORDER[:order_index]:
            full_count = sum(1 for e in full.entries.values() if e.sieve == earlier)
            partial_count = sum(1 for e in partial.entries.values() if e.sieve == earlier)
            assert partial_count == full_count


def load_synthetic(book_id="book_00"):
    return load_book(
        SYNTHETIC_CORPUS / f"{book_id}.tokens.tsv",
        SYNTHETIC_CORPUS / f"{book_id}.mentions.jsonl",
        SYNTHETIC_CORPUS / f"{book_id}.quotes.jsonl",
        book_id=book_id,
    )


def test_perfect_attribution_scores_one_on_synthetic_book():
    book = load_synthetic()
    spans = spans_from_gold(book)
    attribution = attribute_speakers(book, spans)
    score = score_attribution(book, spans, attribution)
    assert score.average_f == pytest.approx(1.0)


def test_ablation_table_shape():
    book = load_synthetic()
    spans = spans_from_gold(book)
    table = ablate(book, spans)
    assert set(table) == {"full"} | {f"-{name}" for name in SIEVE_ORDER}
    assert table["full"].average_f == pytest.approx(1.0)


def test_ablate_requires_gold():
    book = load_synthetic()
    stripped = AnnotatedBook(book.book_id, book.tokens, book.mentions, None)
    with pytest.raises(MissingGold):
        ablate(stripped, [])


def test_unattributed_quotes_become_singletons():
    sentences = [
        (
            0,
            q(W("Hm", upos="INTJ")) + [W("said", "say", "VERB"), W("Anna", upos="PROPN"), W(".", upos="PUNCT")],
            [(4, 4, 1)],
        ),
        (1, q(W("More", upos="ADV")), []),
    ]
    gold = (
        GoldQuote(quote_id=0, start_token=0, end_token=2, speaker_entity_id=1),
        GoldQuote(quote_id=1, start_token=7, end_token=9, speaker_entity_id=1),
    )
    book = build_book(sentences, gold=gold)
    spans = spans_from_gold(book)
    attribution = attribute_speakers(book, spans, SieveConfig(fallback_majority=False))
    # quote 1 has no cue and no fallback: it must still appear, as a singleton
    gold_clusters, pred_clusters = attribution_clusterings(book, spans, attribution)
    assert len(pred_clusters.clusters) == 2
    assert gold_clusters.items() == pred_clusters.items()
