"""Speaker attribution by a cascade of deterministic sieves.

Sieves run in a fixed order (trigram patterns, dependency structure,
vocatives, paragraph-final mention, singleton mention, two-party
conversational alternation, majority fallback); the first sieve to fire
on a quote wins and is recorded as its provenance. Each sieve can be
switched off independently for ablation.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .characters import character_entities
from .cluster_metrics import Clustering, ClusterScore, score_clusterings
from .conversation import DialogueBlock, block_of_quote, segment_dialogue_blocks
from .corpus import AnnotatedBook, Mention, mention_index
from .errors import MissingGold
from .lexicons import load_communication_verbs
from .quotation import QuotationSpan, in_quote_mask

UNATTRIBUTED = "none"

SIEVE_ORDER = (
    "trigram_matching",
    "dependency_parses",
    "vocatives",
    "paragraph_final_mention_linking",
    "singleton_mention_detection",
    "conversational_pattern",
)

_PAUSE_MARKS = {",", ":", ";", "—", "--"}
_TERMINAL_MARKS = {".", "!", "?", ","}


@dataclass(frozen=True)
class SieveConfig:
    trigram_matching: bool = True
    dependency_parses: bool = True
    singleton_mention_detection: bool = True
    paragraph_final_mention_linking: bool = True
    vocatives: bool = True
    conversational_pattern: bool = True
    fallback_majority: bool = True

    def disable(self, name: str) -> "SieveConfig":
        if name not in SIEVE_ORDER:
            raise ValueError(f"unknown sieve: {name}")
        return replace(self, **{name: False})


@dataclass(frozen=True)
class Attribution:
    speaker: Optional[int]
    sieve: str


@dataclass
class QuoteAttribution:
    """Per-quote speaker assignment with the sieve that produced it."""

    entries: dict[int, Attribution] = field(default_factory=dict)

    def speaker_of(self, quote_id: int) -> Optional[int]:
        entry = self.entries.get(quote_id)
        return entry.speaker if entry is not None else None

    def sieve_of(self, quote_id: int) -> Optional[str]:
        entry = self.entries.get(quote_id)
        return entry.sieve if entry is not None else None

    def sieve_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for entry in self.entries.values():
            counts[entry.sieve] = counts.get(entry.sieve, 0) + 1
        return counts


class _BookContext:
    """Precomputed lookups shared by all sieves for one book."""

    def __init__(self, book: AnnotatedBook, quotes: Sequence[QuotationSpan]):
        self.book = book
        self.quotes = sorted(quotes, key=lambda q: q.start_token)
        self.mask = in_quote_mask(book, quotes)
        self.midx = mention_index(book)
        self.characters = character_entities(book)
        self.comm_verbs = load_communication_verbs()
        self.blocks = segment_dialogue_blocks(book, quotes)
        self.block_of = block_of_quote(self.blocks)
        self.quotes_by_id = {q.quote_id: q for q in self.quotes}
        self.paragraph_span: dict[int, tuple[int, int]] = {}
        for tok in book.tokens:
            lo, _ = self.paragraph_span.get(tok.paragraph_id, (tok.token_id, tok.token_id))
            self.paragraph_span[tok.paragraph_id] = (lo, tok.token_id)

    def is_comm_verb(self, token_id: int) -> bool:
        tok = self.book.tokens[token_id]
        return tok.upos == "VERB" and tok.lemma.lower() in self.comm_verbs

    def speaker_mention_at(self, token_id: int) -> Optional[Mention]:
        """Character mention covering an out-of-quote token, if any."""
        if self.mask[token_id]:
            return None
        mention = self.midx.get(token_id)
        if mention is not None and mention.entity_id in self.characters:
            return mention
        return None

    def quotes_in_block(self, block_id: int) -> list[QuotationSpan]:
        return [self.quotes_by_id[qid] for qid in self.blocks[block_id].quote_ids]


def _same_paragraph(ctx: _BookContext, a: int, b: int) -> bool:
    return ctx.book.tokens[a].paragraph_id == ctx.book.tokens[b].paragraph_id


def _sieve_trigram(ctx: _BookContext, quote: QuotationSpan) -> Optional[int]:
    """Quote/verb/mention patterns adjacent to the quote ("..." said Jane)."""
    n = len(ctx.book.tokens)

    def pattern(first: int, second: int) -> Optional[int]:
        if ctx.mask[first] or ctx.mask[second]:
            return None
        if ctx.is_comm_verb(first):
            mention = ctx.speaker_mention_at(second)
            if mention is not None:
                return mention.entity_id
        mention = ctx.speaker_mention_at(first)
        if mention is not None and ctx.is_comm_verb(second):
            return mention.entity_id
        return None

    # trailing attribution: tokens right after the closing mark
    t1, t2 = quote.end_token + 1, quote.end_token + 2
    if t2 < n and _same_paragraph(ctx, quote.end_token, t2):
        entity = pattern(t1, t2)
        if entity is not None:
            return entity

    # leading attribution, skipping one pause mark next to the opening mark
    b = quote.start_token - 1
    if b >= 0 and ctx.book.tokens[b].surface in _PAUSE_MARKS:
        b -= 1
    first, second = b - 1, b
    if first >= 0 and _same_paragraph(ctx, first, quote.start_token):
        entity = pattern(first, second)
        if entity is not None:
            return entity
    return None


def _sieve_dependency(ctx: _BookContext, quote: QuotationSpan) -> Optional[int]:
    """Mentions holding an nsubj relation to a nearby verb of communicating."""
    book = ctx.book
    first_sent = book.tokens[quote.start_token].sentence_id
    last_sent = book.tokens[quote.end_token].sentence_id
    spans = book.sentence_spans()
    lo_sent = max(0, first_sent - 1)
    hi_sent = min(len(spans) - 1, last_sent + 1)
    lo, hi = spans[lo_sent][0], spans[hi_sent][1]

    candidates: list[tuple[int, int, int]] = []  # (distance, tie_rank, entity)
    for tid in range(lo, hi + 1):
        if ctx.mask[tid] or not ctx.is_comm_verb(tid):
            continue
        for child in book.tokens[lo : hi + 1]:
            if child.head != tid or child.dep_rel != "nsubj":
                continue
            mention = ctx.speaker_mention_at(child.token_id)
            if mention is None:
                continue
            distance = min(abs(tid - quote.start_token), abs(tid - quote.end_token))
            tie_rank = 0 if tid > quote.end_token else 1  # prefer trailing phrases
            candidates.append((distance, tie_rank, mention.entity_id))
    if not candidates:
        return None
    candidates.sort()
    return candidates[0][2]


def _vocative_entity(ctx: _BookContext, quote: QuotationSpan) -> Optional[int]:
    """Direct-address mention at the quote edge, set off by punctuation."""
    inner_lo, inner_hi = quote.start_token + 1, quote.end_token - 1
    if inner_lo > inner_hi:
        return None
    mentions = sorted(
        (
            m
            for m in ctx.book.mentions
            if m.start_token >= inner_lo and m.end_token <= inner_hi and m.entity_id in ctx.characters
        ),
        key=lambda m: -m.start_token,
    )
    for m in mentions:
        before = ctx.book.tokens[m.start_token - 1].surface if m.start_token - 1 >= inner_lo else None
        trailing = [ctx.book.tokens[t].surface for t in range(m.end_token + 1, inner_hi + 1)]
        if before == "," and all(s in _TERMINAL_MARKS for s in trailing):
            return m.entity_id
        after = ctx.book.tokens[m.end_token + 1].surface if m.end_token + 1 <= inner_hi else None
        if m.start_token == inner_lo and after == ",":
            return m.entity_id
    return None


def _sieve_vocative(ctx: _BookContext, quote: QuotationSpan) -> Optional[int]:
    """A vocative in the previous quotation names this quote's speaker."""
    block_id = ctx.block_of.get(quote.quote_id)
    if block_id is None:
        return None
    block_quotes = ctx.quotes_in_block(block_id)
    idx = next(i for i, q in enumerate(block_quotes) if q.quote_id == quote.quote_id)
    if idx == 0:
        return None
    return _vocative_entity(ctx, block_quotes[idx - 1])


def _sieve_paragraph_final(ctx: _BookContext, quote: QuotationSpan) -> Optional[int]:
    """A mention ending the quote's paragraph binds the paragraph's quotes."""
    paragraph = ctx.book.tokens[quote.end_token].paragraph_id
    lo, hi = ctx.paragraph_span[paragraph]
    for tid in range(hi, lo - 1, -1):
        if ctx.mask[tid] or ctx.book.tokens[tid].upos == "PUNCT":
            continue
        mention = ctx.speaker_mention_at(tid)
        return mention.entity_id if mention is not None else None
    return None


def _sieve_singleton(ctx: _BookContext, quote: QuotationSpan) -> Optional[int]:
    """Exactly one candidate mentioned in the narration gaps around the quote."""
    start_par = ctx.book.tokens[quote.start_token].paragraph_id
    end_par = ctx.book.tokens[quote.end_token].paragraph_id
    plo, _ = ctx.paragraph_span[start_par]
    _, phi = ctx.paragraph_span[end_par]
    idx = next(i for i, q in enumerate(ctx.quotes) if q.quote_id == quote.quote_id)

    gap_lo = plo
    if idx > 0:
        gap_lo = max(gap_lo, ctx.quotes[idx - 1].end_token + 1)
    after_hi = phi
    if idx + 1 < len(ctx.quotes):
        after_hi = min(after_hi, ctx.quotes[idx + 1].start_token - 1)

    entities: set[int] = set()
    for tid in range(gap_lo, quote.start_token):
        mention = ctx.speaker_mention_at(tid)
        if mention is not None:
            entities.add(mention.entity_id)
    for tid in range(quote.end_token + 1, after_hi + 1):
        mention = ctx.speaker_mention_at(tid)
        if mention is not None:
            entities.add(mention.entity_id)
    if len(entities) == 1:
        return entities.pop()
    return None


def _apply_conversational(ctx: _BookContext, result: dict[int, Attribution]) -> None:
    """Two-party alternation inside each block once exactly two speakers are known."""
    for block in ctx.blocks:
        speakers = {
            result[qid].speaker for qid in block.quote_ids if qid in result and result[qid].speaker is not None
        }
        if len(speakers) != 2:
            continue
        pair = sorted(speakers)
        ordered = ctx.quotes_in_block(block.block_id)

        def other(entity: int) -> int:
            return pair[0] if entity == pair[1] else pair[1]

        previous: Optional[int] = None
        for q in ordered:
            if q.quote_id in result:
                previous = result[q.quote_id].speaker
            elif previous is not None:
                speaker = other(previous)
                result[q.quote_id] = Attribution(speaker, "conversational_pattern")
                previous = speaker
        following: Optional[int] = None
        for q in reversed(ordered):
            if q.quote_id in result:
                following = result[q.quote_id].speaker
            elif following is not None:
                speaker = other(following)
                result[q.quote_id] = Attribution(speaker, "conversational_pattern")
                following = speaker


def _nearest_mention_entity(ctx: _BookContext, quote: QuotationSpan) -> Optional[int]:
    best: Optional[tuple[int, int, int]] = None  # (distance, tie_rank, entity)
    for mention in ctx.book.mentions:
        if mention.entity_id not in ctx.characters:
            continue
        if any(ctx.mask[t] for t in range(mention.start_token, mention.end_token + 1)):
            continue
        if mention.start_token > quote.end_token:
            key = (mention.start_token - quote.end_token, 0, mention.entity_id)
        elif mention.end_token < quote.start_token:
            key = (quote.start_token - mention.end_token, 1, mention.entity_id)
        else:
            continue
        if best is None or key < best:
            best = key
    return best[2] if best is not None else None


def _fallback_majority(ctx: _BookContext, quote: QuotationSpan, result: dict[int, Attribution]) -> Optional[int]:
    """Majority speaker in the enclosing block; ties go to the most recent."""
    block_id = ctx.block_of.get(quote.quote_id)
    ordered = ctx.quotes_in_block(block_id) if block_id is not None else []
    counts: dict[int, int] = {}
    for q in ordered:
        entry = result.get(q.quote_id)
        if entry is not None and entry.speaker is not None:
            counts[entry.speaker] = counts.get(entry.speaker, 0) + 1
    if counts:
        top = max(counts.values())
        tied = {e for e, c in counts.items() if c == top}
        if len(tied) == 1:
            return tied.pop()
        idx = next(i for i, q in enumerate(ordered) if q.quote_id == quote.quote_id)
        for q in reversed(ordered[:idx]):
            entry = result.get(q.quote_id)
            if entry is not None and entry.speaker in tied:
                return entry.speaker
        for q in ordered[idx + 1 :]:
            entry = result.get(q.quote_id)
            if entry is not None and entry.speaker in tied:
                return entry.speaker
        return sorted(tied)[0]
    return _nearest_mention_entity(ctx, quote)


def attribute_speakers(
    book: AnnotatedBook,
    quotes: Sequence[QuotationSpan],
    config: SieveConfig = SieveConfig(),
) -> QuoteAttribution:
    """Assign a speaker entity to every quote; deterministic in its inputs."""
    ctx = _BookContext(book, quotes)
    result: dict[int, Attribution] = {}

    per_quote_sieves = (
        ("trigram_matching", _sieve_trigram),
        ("dependency_parses", _sieve_dependency),
        ("vocatives", _sieve_vocative),
        ("paragraph_final_mention_linking", _sieve_paragraph_final),
        ("singleton_mention_detection", _sieve_singleton),
    )
    for name, sieve in per_quote_sieves:
        if not getattr(config, name):
            continue
        for quote in ctx.quotes:
            if quote.quote_id in result:
                continue
            entity = sieve(ctx, quote)
            if entity is not None:
                result[quote.quote_id] = Attribution(entity, name)

    if config.conversational_pattern:
        _apply_conversational(ctx, result)

    for quote in ctx.quotes:
        if quote.quote_id in result:
            continue
        speaker = _fallback_majority(ctx, quote, result) if config.fallback_majority else None
        if speaker is not None:
            result[quote.quote_id] = Attribution(speaker, "majority_fallback")
        else:
            result[quote.quote_id] = Attribution(None, UNATTRIBUTED)

    return QuoteAttribution(entries={q.quote_id: result[q.quote_id] for q in ctx.quotes})


def attribution_clusterings(
    book: AnnotatedBook,
    quotes: Sequence[QuotationSpan],
    attribution: QuoteAttribution,
) -> tuple[Clustering, Clustering]:
    """Gold and predicted quote clusterings over span-matched quotes.

    Quotes are aligned to gold by exact span; unattributed predictions
    become singleton clusters so they are penalized but not discarded.
    """
    if book.gold_quotes is None:
        raise MissingGold(f"{book.book_id}: no gold quotes")
    gold_by_span = {(g.start_token, g.end_token): g for g in book.gold_quotes}
    gold_assign: dict[int, object] = {}
    pred_assign: dict[int, object] = {}
    for q in quotes:
        gold_quote = gold_by_span.get((q.start_token, q.end_token))
        if gold_quote is None:
            continue
        gold_assign[q.quote_id] = gold_quote.speaker_entity_id
        speaker = attribution.speaker_of(q.quote_id)
        pred_assign[q.quote_id] = speaker if speaker is not None else f"unattributed-{q.quote_id}"
    return Clustering.from_assignments(gold_assign), Clustering.from_assignments(pred_assign)


def score_attribution(
    book: AnnotatedBook,
    quotes: Sequence[QuotationSpan],
    attribution: QuoteAttribution,
) -> ClusterScore:
    gold, pred = attribution_clusterings(book, quotes, attribution)
    return score_clusterings(gold, pred)


def ablate(
    book: AnnotatedBook,
    quotes: Sequence[QuotationSpan],
    base_config: SieveConfig = SieveConfig(),
) -> dict[str, ClusterScore]:
    """Score the full configuration and each single-sieve ablation."""
    if book.gold_quotes is None:
        raise MissingGold(f"{book.book_id}: ablation requires gold speakers")
    table: dict[str, ClusterScore] = {}
    table["full"] = score_attribution(book, quotes, attribute_speakers(book, quotes, base_config))
    for name in SIEVE_ORDER:
        config = base_config.disable(name)
        table[f"-{name}"] = score_attribution(book, quotes, attribute_speakers(book, quotes, config))
    return table
