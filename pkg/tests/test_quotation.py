import pytest

from litprop.corpus import AnnotatedBook
from litprop.quotation import (
    QuotationSpan,
    identify_quotations,
    in_quote_mask,
    score_quotations,
)

from conftest import make_tokens


def book_from_surfaces(spec):
    """spec: list of (surface, sentence_id, paragraph_id)."""
    rows = [(s, p, surface, surface.lower(), "PUNCT" if surface in '".,!?"' else "X", None, "dep") for surface, s, p in spec]
    return AnnotatedBook("q", make_tokens(rows), ())


def test_no_quote_marks_yields_nothing():
    book = book_from_surfaces([("Hello", 0, 0), ("there", 0, 0), (".", 0, 0)])
    assert identify_quotations(book) == []


def test_single_balanced_pair():
    book = book_from_surfaces(
        [('"', 0, 0), ("Hello", 0, 0), (".", 0, 0), ('"', 0, 0), ("said", 0, 0), ("Jane", 0, 0), (".", 0, 0)]
    )
    spans = identify_quotations(book)
    assert [(s.start_token, s.end_token) for s in spans] == [(0, 3)]
    assert spans[0].quote_id == 0


def test_two_paragraphs_two_spans():
    book = book_from_surfaces(
        [('"', 0, 0), ("Hi", 0, 0), ('"', 0, 0), ('"', 1, 1), ("Ho", 1, 1), ('"', 1, 1)]
    )
    spans = identify_quotations(book)
    assert [(s.start_token, s.end_token) for s in spans] == [(0, 2), (3, 5)]


def test_continued_quotation_across_paragraphs():
    # open in paragraph 0, next paragraph begins with an opening mark: continues
    book = book_from_surfaces(
        [('"', 0, 0), ("He", 0, 0), ("spoke", 0, 0), ('"', 1, 1), ("and", 1, 1), ("ended", 1, 1), ('"', 1, 1)]
    )
    spans = identify_quotations(book)
    assert [(s.start_token, s.end_token) for s in spans] == [(0, 6)]


def test_abandoned_at_paragraph_break():
    book = book_from_surfaces(
        [('"', 0, 0), ("He", 0, 0), ("spoke", 0, 0), ("Narration", 1, 1), ('"', 1, 1), ("Hi", 1, 1), ('"', 1, 1)]
    )
    spans = identify_quotations(book)
    assert [(s.start_token, s.end_token) for s in spans] == [(4, 6)]


def test_trailing_unbalanced_mark_ignored():
    book = book_from_surfaces([('"', 0, 0), ("Hi", 0, 0), ('"', 0, 0), ('"', 0, 0), ("oops", 0, 0)])
    spans = identify_quotations(book)
    assert [(s.start_token, s.end_token) for s in spans] == [(0, 2)]


def test_curly_marks_and_stray_closer():
    book = book_from_surfaces([("”", 0, 0), ("“", 0, 0), ("Hi", 0, 0), ("”", 0, 0)])
    spans = identify_quotations(book)
    assert [(s.start_token, s.end_token) for s in spans] == [(1, 3)]


def test_overlong_balanced_span_rejected():
    spec = [('"', 0, 0)] + [("word", 0, 0)] * 501 + [('"', 0, 0)]
    book = book_from_surfaces(spec)
    assert identify_quotations(book) == []


def test_spans_never_overlap_or_nest():
    # alternating marks over several paragraphs
    spec = []
    for p in range(6):
        spec.extend([('"', p, p), ("w", p, p), ('"', p, p), ("n", p, p)])
    book = book_from_surfaces(spec)
    spans = identify_quotations(book)
    for a, b in zip(spans, spans[1:]):
        assert a.end_token < b.start_token
    for s in spans:
        assert book.tokens[s.start_token].surface == '"'
        assert book.tokens[s.end_token].surface == '"'


def test_single_quote_marks_config_flag():
    spec = [("'", 0, 0), ("Hi", 0, 0), ("'", 0, 0)]
    book = book_from_surfaces(spec)
    assert identify_quotations(book) == []
    spans = identify_quotations(book, enable_single_quotes=True)
    assert [(s.start_token, s.end_token) for s in spans] == [(0, 2)]


def span(a, b):
    return QuotationSpan(quote_id=0, start_token=a, end_token=b)


def test_score_identity():
    spans = [span(5, 10), span(20, 30)]
    s = score_quotations(spans, spans)
    assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0)


def test_score_worked_example():
    gold = [span(5, 10), span(20, 30)]
    pred = [span(5, 10), span(40, 45), span(50, 55)]
    s = score_quotations(pred, gold)
    assert s.precision == pytest.approx(1 / 3)
    assert s.recall == pytest.approx(1 / 2)
    assert s.f1 == pytest.approx(0.4)
    assert (s.true_positives, s.false_positives, s.false_negatives) == (1, 2, 1)


def test_score_symmetry_swaps_p_and_r():
    gold = [span(0, 3), span(8, 9)]
    pred = [span(0, 3), span(5, 6), span(11, 12)]
    forward = score_quotations(pred, gold)
    backward = score_quotations(gold, pred)
    assert forward.precision == pytest.approx(backward.recall)
    assert forward.recall == pytest.approx(backward.precision)
    assert forward.f1 == pytest.approx(backward.f1)


def test_empty_prediction_scores_zero():
    s = score_quotations([], [span(0, 1)])
    assert (s.precision, s.recall, s.f1) == (0.0, 0.0, 0.0)


def test_in_quote_mask():
    book = book_from_surfaces([('"', 0, 0), ("Hi", 0, 0), ('"', 0, 0), ("said", 0, 0)])
    spans = identify_quotations(book)
    assert in_quote_mask(book, spans) == [True, True, True, False]
