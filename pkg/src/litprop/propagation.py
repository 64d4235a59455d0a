"""Detection of information-propagation triads and counterfactual sampling.

Implicit propagation: a topic tuple first voiced by speaker A (with B
co-present, C absent) and repeated tuple-for-tuple by B in a later block
where C is co-present. Explicit propagation: a quote whose speech reports
another character's words through a report verb ("Bob told me that ...").
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .characters import character_entities
from .conversation import DialogueBlock
from .corpus import AnnotatedBook, mention_index
from .lexicons import load_report_verbs
from .quotation import QuotationSpan
from .tuples import PropTuple, SlotValue

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ImplicitEvent:
    a_entity: int
    b_entity: int
    c_entity: int
    tuple_key: tuple[SlotValue, str, SlotValue]
    origin_block_id: int
    repeat_block_id: int


@dataclass(frozen=True)
class ExplicitEvent:
    a_entity: int  # reported source
    b_entity: int  # attributed speaker of the quote
    c_entities: tuple[int, ...]  # listeners, at least one
    quote_id: int
    verb: str  # report-verb lemma


@dataclass(frozen=True)
class CounterfactualPair:
    b_entity: int
    b_prime_entity: int
    event_index: int  # position into the implicit-event list


def detect_implicit(
    book: AnnotatedBook,
    blocks: Sequence[DialogueBlock],
    tuples: Sequence[PropTuple],
) -> list[ImplicitEvent]:
    """Triads (A, B, C) from repeated tuples across dialogue blocks.

    The first voicing of a tuple defines A (ties inside one block break
    toward the earlier verb token). Every later voicing by another speaker
    B emits one event per character C co-present at the repetition but
    absent from the origin, provided B heard the origin (was co-present).
    """
    present = {b.block_id: b.co_present_entities for b in blocks}
    order = {b.block_id: i for i, b in enumerate(blocks)}

    by_key: dict[tuple, list[PropTuple]] = {}
    for t in tuples:
        if t.speaker_entity_id is None or t.source_block_id not in order:
            continue
        by_key.setdefault(t.key(), []).append(t)

    events: list[ImplicitEvent] = []
    seen: set[tuple] = set()
    for key in sorted(by_key, key=str):
        instances = sorted(by_key[key], key=lambda t: (order[t.source_block_id], t.verb_token_id))
        origin = instances[0]
        a = origin.speaker_entity_id
        origin_block = origin.source_block_id
        origin_present = present[origin_block]
        for repeat in instances[1:]:
            if repeat.source_block_id == origin_block:
                continue
            b = repeat.speaker_entity_id
            if b == a or b not in origin_present:
                continue
            for c in sorted(present[repeat.source_block_id]):
                if c == b or c in origin_present:
                    continue
                signature = (a, b, c, key, origin_block, repeat.source_block_id)
                if signature in seen:
                    continue
                seen.add(signature)
                events.append(
                    ImplicitEvent(
                        a_entity=a,
                        b_entity=b,
                        c_entity=c,
                        tuple_key=key,
                        origin_block_id=origin_block,
                        repeat_block_id=repeat.source_block_id,
                    )
                )
    events.sort(key=lambda e: (e.origin_block_id, e.repeat_block_id, str(e.tuple_key), e.c_entity))
    return events


def detect_explicit(
    book: AnnotatedBook,
    quotes: Sequence[QuotationSpan],
    attribution,
    blocks: Sequence[DialogueBlock],
    report_verbs: Optional[frozenset[str]] = None,
) -> list[ExplicitEvent]:
    """Reported speech inside quotes: a character nsubj of a report verb.

    The reported source must resolve through coreference to a character
    other than the speaker; listeners are the block's co-present characters
    minus the speaker, and an event needs at least one.
    """
    verbs = report_verbs if report_verbs is not None else load_report_verbs()
    midx = mention_index(book)
    characters = character_entities(book)
    block_members = {b.block_id: b.co_present_entities for b in blocks}
    quote_block = {qid: b.block_id for b in blocks for qid in b.quote_ids}

    children: dict[int, list[int]] = {}
    for tok in book.tokens:
        if tok.head is not None:
            children.setdefault(tok.head, []).append(tok.token_id)

    events: list[ExplicitEvent] = []
    for quote in sorted(quotes, key=lambda q: q.start_token):
        speaker = attribution.speaker_of(quote.quote_id)
        if speaker is None or quote.quote_id not in quote_block:
            continue
        listeners = tuple(sorted(block_members[quote_block[quote.quote_id]] - {speaker}))
        if not listeners:
            continue
        for tid in range(quote.start_token + 1, quote.end_token):
            tok = book.tokens[tid]
            if tok.upos != "VERB" or tok.lemma.lower() not in verbs:
                continue
            source: Optional[int] = None
            for child in children.get(tid, ()):
                if book.tokens[child].dep_rel not in ("nsubj", "nsubj:pass"):
                    continue
                mention = midx.get(child)
                if mention is not None and mention.entity_id in characters:
                    source = mention.entity_id
                    break
            if source is None or source == speaker:
                continue
            events.append(
                ExplicitEvent(
                    a_entity=source,
                    b_entity=speaker,
                    c_entities=listeners,
                    quote_id=quote.quote_id,
                    verb=tok.lemma.lower(),
                )
            )
    return events


def sample_counterfactuals(
    events: Sequence[ImplicitEvent],
    blocks: Sequence[DialogueBlock],
    attribution,
    seed: int,
) -> list[CounterfactualPair]:
    """One non-propagating co-present B' per implicit event where possible.

    Eligible candidates heard the origin (co-present there), never voice
    the event's tuple, and speak at least once in the book. Events with no
    local candidate draw from the pool of candidates seen across the other
    events; events are skipped (and logged) only when that pool is empty.
    """
    rng = np.random.default_rng(seed)
    present = {b.block_id: b.co_present_entities for b in blocks}
    speaking = {
        entry.speaker for entry in attribution.entries.values() if entry.speaker is not None
    }

    # entities that voice a given tuple key anywhere disqualify themselves
    voicers: dict[tuple, set[int]] = {}
    for e in events:
        voicers.setdefault(e.tuple_key, set()).update({e.a_entity, e.b_entity})

    local_candidates: list[list[int]] = []
    for e in events:
        eligible = sorted(
            entity
            for entity in present[e.origin_block_id]
            if entity not in voicers[e.tuple_key] and entity != e.b_entity and entity in speaking
        )
        local_candidates.append(eligible)
    pool = sorted({entity for eligible in local_candidates for entity in eligible})

    pairs: list[CounterfactualPair] = []
    for index, e in enumerate(events):
        eligible = local_candidates[index]
        if not eligible:
            eligible = [
                entity for entity in pool if entity != e.b_entity and entity not in voicers[e.tuple_key]
            ]
        if not eligible:
            log.info("event %d: no counterfactual candidate anywhere; skipped", index)
            continue
        choice = eligible[int(rng.integers(len(eligible)))]
        pairs.append(CounterfactualPair(b_entity=e.b_entity, b_prime_entity=choice, event_index=index))
    return pairs
