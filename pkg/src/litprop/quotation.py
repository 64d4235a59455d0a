"""Quotation-span identification and exact-match span scoring.

Spans are found by pairing quote-delimiter tokens: text between an opening
and a closing mark forms one quotation, inclusive of the marks. Dash- or
indentation-delimited dialogue is out of scope; books using it should be
logged as unsupported upstream.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from .corpus import AnnotatedBook, GoldQuote

log = logging.getLogger(__name__)

OPENING_MARKS = {"“"}  # left curly double quote
CLOSING_MARKS = {"”"}  # right curly double quote
AMBIGUOUS_MARKS = {'"'}
SINGLE_OPENING = {"‘"}
SINGLE_CLOSING = {"’"}
SINGLE_AMBIGUOUS = {"'"}

# Balanced spans longer than this are treated as a delimiter inversion and
# dropped rather than emitted.
MAX_QUOTE_TOKENS = 500


@dataclass(frozen=True, slots=True)
class QuotationSpan:
    quote_id: int
    start_token: int
    end_token: int  # inclusive, including the delimiter tokens
    dialogue_block_hint: Optional[int] = None  # paragraph id of the opening mark

    def covers(self, token_id: int) -> bool:
        return self.start_token <= token_id <= self.end_token


@dataclass(frozen=True, slots=True)
class SpanScore:
    precision: float
    recall: float
    f1: float
    true_positives: int
    false_positives: int
    false_negatives: int


def _mark_kind(surface: str, enable_single_quotes: bool) -> Optional[str]:
    if surface in OPENING_MARKS:
        return "open"
    if surface in CLOSING_MARKS:
        return "close"
    if surface in AMBIGUOUS_MARKS:
        return "either"
    if enable_single_quotes:
        if surface in SINGLE_OPENING:
            return "open"
        if surface in SINGLE_CLOSING:
            return "close"
        if surface in SINGLE_AMBIGUOUS:
            return "either"
    return None


def identify_quotations(book: AnnotatedBook, enable_single_quotes: bool = False) -> list[QuotationSpan]:
    """Pair quote delimiters into maximal non-overlapping spans, in order.

    A span left open at a paragraph boundary continues when the next
    paragraph begins with an opening delimiter (the continued-quotation
    printing convention); otherwise it is abandoned. A trailing unbalanced
    delimiter never produces a span.
    """
    spans: list[QuotationSpan] = []
    open_start: Optional[int] = None  # token id of the opening mark
    tokens = book.tokens

    for tok in tokens:
        if open_start is not None and tok.paragraph_id != tokens[open_start].paragraph_id:
            # crossed at least one paragraph boundary since opening
            paragraph_head = tok.token_id == 0 or tokens[tok.token_id - 1].paragraph_id != tok.paragraph_id
            kind = _mark_kind(tok.surface, enable_single_quotes)
            if paragraph_head and kind in ("open", "either"):
                # continuation mark: quote runs on, mark consumed as an opener
                continue
            if paragraph_head:
                log.info("%s: quotation opened at token %d abandoned at paragraph end", book.book_id, open_start)
                open_start = None

        kind = _mark_kind(tok.surface, enable_single_quotes)
        if kind is None:
            continue
        if open_start is None:
            if kind in ("open", "either"):
                open_start = tok.token_id
            else:
                log.info("%s: stray closing mark at token %d", book.book_id, tok.token_id)
        else:
            if kind in ("close", "either"):
                length = tok.token_id - open_start + 1
                if length > MAX_QUOTE_TOKENS:
                    log.warning(
                        "%s: span of %d tokens at %d rejected as probable delimiter inversion",
                        book.book_id,
                        length,
                        open_start,
                    )
                else:
                    spans.append(
                        QuotationSpan(
                            quote_id=len(spans),
                            start_token=open_start,
                            end_token=tok.token_id,
                            dialogue_block_hint=tokens[open_start].paragraph_id,
                        )
                    )
                open_start = None
            # an explicit opening mark while a span is open is quote-internal; ignore

    if open_start is not None:
        log.info("%s: unbalanced trailing delimiter at token %d ignored", book.book_id, open_start)
    return spans


def spans_from_gold(book: AnnotatedBook) -> list[QuotationSpan]:
    """Gold quotes as QuotationSpan objects (for gold-boundary attribution)."""
    if book.gold_quotes is None:
        return []
    return [
        QuotationSpan(quote_id=q.quote_id, start_token=q.start_token, end_token=q.end_token)
        for q in sorted(book.gold_quotes, key=lambda q: q.start_token)
    ]


def score_quotations(
    pred: Sequence[QuotationSpan],
    gold: Sequence[QuotationSpan | GoldQuote],
) -> SpanScore:
    """Exact-boundary span match: a prediction counts iff both ends agree."""
    pred_set = {(s.start_token, s.end_token) for s in pred}
    gold_set = {(g.start_token, g.end_token) for g in gold}
    tp = len(pred_set & gold_set)
    fp = len(pred_set) - tp
    fn = len(gold_set) - tp
    precision = tp / len(pred_set) if pred_set else 0.0
    recall = tp / len(gold_set) if gold_set else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return SpanScore(precision, recall, f1, tp, fp, fn)


def in_quote_mask(book: AnnotatedBook, quotes: Sequence[QuotationSpan]) -> list[bool]:
    """Per-token flag: True when the token lies inside any quotation span."""
    mask = [False] * len(book.tokens)
    for span in quotes:
        for tid in range(span.start_token, span.end_token + 1):
            mask[tid] = True
    return mask


def quote_covering(quotes: Sequence[QuotationSpan], token_id: int) -> Optional[QuotationSpan]:
    for span in quotes:
        if span.covers(token_id):
            return span
    return None
