"""Dialogue-block segmentation and the weighted co-presence character network.

A dialogue block is a maximal run of quote-bearing sentences in which no
three contiguous sentences lack quoted dialogue. Characters mentioned
outside quotations within a block (plus the attributed speakers of its
quotes) are co-present; each block contributes one unit of edge weight to
every co-present pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, Optional, Sequence

from .characters import character_entities
from .corpus import AnnotatedBook
from .errors import UnknownNode
from .lexicons import GenderLexicon
from .quotation import QuotationSpan, in_quote_mask

if TYPE_CHECKING:
    from .attribution import QuoteAttribution

BLOCK_GAP_SENTENCES = 3  # this many quoteless sentences terminate a block


@dataclass(frozen=True)
class DialogueBlock:
    block_id: int
    start_sentence: int
    end_sentence: int  # inclusive
    quote_ids: tuple[int, ...]
    co_present_entities: frozenset[int]


class CharacterNetwork:
    """Undirected graph over entity ids with integer co-presence weights."""

    def __init__(self):
        self._adj: dict[int, dict[int, int]] = {}

    def add_node(self, v: int) -> None:
        self._adj.setdefault(v, {})

    def add_edge(self, u: int, v: int, weight: int = 1) -> None:
        if u == v:
            raise ValueError("self-loops are not allowed")
        self.add_node(u)
        self.add_node(v)
        self._adj[u][v] = self._adj[u].get(v, 0) + weight
        self._adj[v][u] = self._adj[v].get(u, 0) + weight

    def nodes(self) -> list[int]:
        return sorted(self._adj)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        for u in self.nodes():
            for v in sorted(self._adj[u]):
                if u < v:
                    yield u, v, self._adj[u][v]

    def neighbors(self, v: int) -> list[int]:
        if v not in self._adj:
            raise UnknownNode(v)
        return sorted(self._adj[v])

    def degree(self, v: int) -> int:
        if v not in self._adj:
            raise UnknownNode(v)
        return len(self._adj[v])

    def weight(self, u: int, v: int) -> int:
        return self._adj.get(u, {}).get(v, 0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, {})

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def degree_sequence(self) -> list[tuple[int, int]]:
        """(node, degree) pairs in sorted node order."""
        return [(v, len(self._adj[v])) for v in self.nodes()]

    def copy(self) -> "CharacterNetwork":
        dup = CharacterNetwork()
        for v in self._adj:
            dup.add_node(v)
        for u, v, w in self.edges():
            dup.add_edge(u, v, w)
        return dup


def segment_dialogue_blocks(
    book: AnnotatedBook,
    quotes: Sequence[QuotationSpan],
    attribution: Optional["QuoteAttribution"] = None,
    gender_lexicon: Optional[GenderLexicon] = None,
) -> list[DialogueBlock]:
    """Group quotes into conversation blocks and compute co-presence sets.

    Segmentation depends only on which sentences bear quotes. When an
    attribution is supplied, each block's attributed speakers join its
    co-presence set (a speaker is present even if the narration never
    names them).
    """
    if not quotes:
        return []
    spans = book.sentence_spans()

    quote_sentences: dict[int, list[int]] = {}
    for q in quotes:
        first_sent = book.tokens[q.start_token].sentence_id
        last_sent = book.tokens[q.end_token].sentence_id
        quote_sentences.setdefault(q.quote_id, list(range(first_sent, last_sent + 1)))

    bearing = sorted({s for sents in quote_sentences.values() for s in sents})
    runs: list[tuple[int, int]] = []
    run_start = prev = bearing[0]
    for s in bearing[1:]:
        if s - prev - 1 >= BLOCK_GAP_SENTENCES:
            runs.append((run_start, prev))
            run_start = s
        prev = s
    runs.append((run_start, prev))

    characters = character_entities(book, gender_lexicon)
    mask = in_quote_mask(book, quotes)

    blocks: list[DialogueBlock] = []
    for block_id, (start_sent, end_sent) in enumerate(runs):
        qids = sorted(
            qid for qid, sents in quote_sentences.items() if start_sent <= sents[0] <= end_sent
        )
        lo = spans[start_sent][0]
        hi = spans[end_sent][1]
        present: set[int] = set()
        for mention in book.mentions:
            if mention.entity_id not in characters:
                continue
            if mention.start_token >= lo and mention.end_token <= hi:
                if not any(mask[tid] for tid in range(mention.start_token, mention.end_token + 1)):
                    present.add(mention.entity_id)
        if attribution is not None:
            for qid in qids:
                speaker = attribution.speaker_of(qid)
                if speaker is not None:
                    present.add(speaker)
        blocks.append(
            DialogueBlock(
                block_id=block_id,
                start_sentence=start_sent,
                end_sentence=end_sent,
                quote_ids=tuple(qids),
                co_present_entities=frozenset(present),
            )
        )
    return blocks


def block_of_quote(blocks: Sequence[DialogueBlock]) -> dict[int, int]:
    """quote_id to block_id lookup."""
    return {qid: b.block_id for b in blocks for qid in b.quote_ids}


def build_network(book: AnnotatedBook, blocks: Sequence[DialogueBlock]) -> CharacterNetwork:
    """Clique per block over its co-present characters; weights accumulate."""
    net = CharacterNetwork()
    for block in blocks:
        members = sorted(block.co_present_entities)
        for v in members:
            net.add_node(v)
        for i, u in enumerate(members):
            for v in members[i + 1 :]:
                net.add_edge(u, v, 1)
    return net
