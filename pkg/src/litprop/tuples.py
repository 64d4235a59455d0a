"""Propositional (subject, verb, object) tuples from quoted speech.

Tuples are read off dependency arcs inside quotations: a head with an
nsubj and/or obj child yields one tuple. Slot values resolve through
coreference to entity ids when a mention covers the slot token, and fall
back to the token lemma otherwise. First- and second-person pronouns
disqualify a tuple entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .conversation import DialogueBlock, block_of_quote, segment_dialogue_blocks
from .corpus import AnnotatedBook, mention_index
from .lexicons import TopicLexicon
from .quotation import QuotationSpan

# Entity slots are ints (entity ids); nominal slots are lowercase lemmas.
SlotValue = Union[int, str, None]

BLOCKED_PRONOUNS = frozenset(
    ["i", "me", "my", "mine", "we", "us", "our", "ours", "you", "your", "yours"]
)


@dataclass(frozen=True)
class PropTuple:
    subject: SlotValue
    verb: str  # lemma
    object: SlotValue
    source_quote_id: int
    source_block_id: int
    speaker_entity_id: Optional[int]
    verb_token_id: int

    def key(self) -> tuple[SlotValue, str, SlotValue]:
        """Matching identity: entity slots by id, nominal slots by lemma."""
        return (self.subject, self.verb, self.object)


def _slot_words(tuple_: PropTuple) -> list[str]:
    words = [tuple_.verb]
    for slot in (tuple_.subject, tuple_.object):
        if isinstance(slot, str):
            words.append(slot)
    return words


def extract_tuples(
    book: AnnotatedBook,
    quotes: Sequence[QuotationSpan],
    attribution=None,
    blocks: Optional[Sequence[DialogueBlock]] = None,
) -> list[PropTuple]:
    """One tuple per in-quote head bearing an nsubj and/or obj child.

    Passive subjects (nsubj:pass) fill the object slot and a marked agent
    (obl:agent) fills the subject slot, so a proposition keeps its identity
    across voice. Heads are verbs plus any token governing an nsubj, which
    covers copular predicates (sick, dead, guilty).
    """
    if blocks is None:
        blocks = segment_dialogue_blocks(book, quotes, attribution)
    block_lookup = block_of_quote(blocks)
    midx = mention_index(book)
    tokens = book.tokens

    children: dict[int, list[int]] = {}
    for tok in tokens:
        if tok.head is not None:
            children.setdefault(tok.head, []).append(tok.token_id)

    def resolve(token_id: Optional[int]) -> tuple[SlotValue, bool]:
        """Slot value plus a flag for blocked first/second-person pronouns."""
        if token_id is None:
            return None, False
        tok = tokens[token_id]
        if tok.surface.lower() in BLOCKED_PRONOUNS or tok.lemma.lower() in BLOCKED_PRONOUNS:
            return None, True
        mention = midx.get(token_id)
        if mention is not None:
            return mention.entity_id, False
        return tok.lemma.lower(), False

    out: list[PropTuple] = []
    for quote in sorted(quotes, key=lambda q: q.start_token):
        speaker = attribution.speaker_of(quote.quote_id) if attribution is not None else None
        block_id = block_lookup.get(quote.quote_id, -1)
        for tid in range(quote.start_token + 1, quote.end_token):
            tok = tokens[tid]
            arcs: dict[str, int] = {}
            for c in children.get(tid, ()):  # leftmost child wins per relation
                arcs.setdefault(tokens[c].dep_rel, c)
            has_subj = "nsubj" in arcs or "nsubj:pass" in arcs
            if tok.upos != "VERB" and not has_subj:
                continue
            if not has_subj and "obj" not in arcs:
                continue
            if "nsubj:pass" in arcs:
                subject_tok = arcs.get("obl:agent")
                object_tok = arcs.get("nsubj:pass")
            else:
                subject_tok = arcs.get("nsubj")
                object_tok = arcs.get("obj")
            subject, blocked_s = resolve(subject_tok)
            object_, blocked_o = resolve(object_tok)
            if blocked_s or blocked_o:
                continue
            out.append(
                PropTuple(
                    subject=subject,
                    verb=tok.lemma.lower(),
                    object=object_,
                    source_quote_id=quote.quote_id,
                    source_block_id=block_id,
                    speaker_entity_id=speaker,
                    verb_token_id=tid,
                )
            )
    return out


def filter_topic(tuples: Sequence[PropTuple], lexicon: TopicLexicon) -> list[PropTuple]:
    """Keep tuples whose verb or nominal slots touch any topic category."""
    vocabulary = lexicon.all_words()
    return [t for t in tuples if any(word in vocabulary for word in _slot_words(t))]
