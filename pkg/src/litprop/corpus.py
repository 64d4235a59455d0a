"""Annotation data model and readers/writers for one-book annotation bundles.

A bundle consists of three stand-off files sharing a token index space:

* ``<book>.tokens.tsv``    tab-separated token table (header row required)
* ``<book>.mentions.jsonl``  one coreference mention per line
* ``<book>.quotes.jsonl``    optional gold quotation spans with speakers
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import DanglingReference, EmptyBook, MalformedRecord

TOKEN_COLUMNS = (
    "token_id",
    "sentence_id",
    "paragraph_id",
    "surface",
    "lemma",
    "upos",
    "head",
    "dep_rel",
)


@dataclass(frozen=True, slots=True)
class Token:
    token_id: int
    sentence_id: int
    paragraph_id: int
    surface: str
    lemma: str
    upos: str
    head: Optional[int]  # None for the syntactic root
    dep_rel: str


@dataclass(frozen=True, slots=True)
class Mention:
    mention_id: int
    start_token: int
    end_token: int  # inclusive
    entity_id: int
    text: str

    def span(self) -> tuple[int, int]:
        return self.start_token, self.end_token

    def covers(self, token_id: int) -> bool:
        return self.start_token <= token_id <= self.end_token

    def width(self) -> int:
        return self.end_token - self.start_token + 1


@dataclass(frozen=True, slots=True)
class GoldQuote:
    quote_id: int
    start_token: int
    end_token: int  # inclusive
    speaker_entity_id: int


@dataclass(frozen=True)
class AnnotatedBook:
    """Immutable view of one annotated text; safe to share across workers."""

    book_id: str
    tokens: tuple[Token, ...]
    mentions: tuple[Mention, ...]
    gold_quotes: Optional[tuple[GoldQuote, ...]] = None

    def __len__(self) -> int:
        return len(self.tokens)

    def sentence_count(self) -> int:
        return self.tokens[-1].sentence_id + 1 if self.tokens else 0

    def sentence_spans(self) -> list[tuple[int, int]]:
        """Inclusive token ranges per sentence, indexed by sentence_id."""
        spans: list[tuple[int, int]] = []
        for tok in self.tokens:
            if tok.sentence_id == len(spans):
                spans.append((tok.token_id, tok.token_id))
            else:
                start, _ = spans[tok.sentence_id]
                spans[tok.sentence_id] = (start, tok.token_id)
        return spans

    def entity_ids(self) -> set[int]:
        return {m.entity_id for m in self.mentions}

    def mentions_of(self, entity_id: int) -> list[Mention]:
        return [m for m in self.mentions if m.entity_id == entity_id]


def mention_index(book: AnnotatedBook) -> dict[int, Mention]:
    """Map each covered token to its smallest covering mention."""
    index: dict[int, Mention] = {}
    for mention in book.mentions:
        for tid in range(mention.start_token, mention.end_token + 1):
            prior = index.get(tid)
            if prior is None or mention.width() < prior.width():
                index[tid] = mention
    return index


def _parse_int(value: str, path, line_no: int, column: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise MalformedRecord(path, line_no, column, f"not an integer: {value!r}") from None


def _read_tokens(path: Path) -> list[Token]:
    tokens: list[Token] = []
    with open(path, encoding="utf-8") as handle:
        header = handle.readline()
        if not header.strip():
            raise EmptyBook(f"{path}: no header row")
        names = tuple(header.rstrip("\n").split("\t"))
        if names != TOKEN_COLUMNS:
            raise MalformedRecord(path, 1, "header", f"expected columns {TOKEN_COLUMNS}, got {names}")
        for line_no, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != len(TOKEN_COLUMNS):
                raise MalformedRecord(path, line_no, "row", f"expected {len(TOKEN_COLUMNS)} fields, got {len(fields)}")
            head = _parse_int(fields[6], path, line_no, "head")
            tokens.append(
                Token(
                    token_id=_parse_int(fields[0], path, line_no, "token_id"),
                    sentence_id=_parse_int(fields[1], path, line_no, "sentence_id"),
                    paragraph_id=_parse_int(fields[2], path, line_no, "paragraph_id"),
                    surface=fields[3],
                    lemma=fields[4],
                    upos=fields[5],
                    head=None if head < 0 else head,
                    dep_rel=fields[7],
                )
            )
    if not tokens:
        raise EmptyBook(f"{path}: no token rows")
    return tokens


def _read_jsonl(path: Path, required: Sequence[str]) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(path, line_no, exc.colno, exc.msg) from None
            for key in required:
                if key not in record:
                    raise MalformedRecord(path, line_no, key, f"missing field {key!r}")
            records.append(record)
    return records


def load_book(
    tokens_path,
    mentions_path,
    gold_quotes_path=None,
    book_id: Optional[str] = None,
) -> AnnotatedBook:
    """Read and validate one annotation bundle.

    Raises MalformedRecord / DanglingReference / EmptyBook on bad input;
    the returned book satisfies every structural invariant checked by
    :func:`validate`.
    """
    tokens_path = Path(tokens_path)
    tokens = _read_tokens(tokens_path)

    mentions = [
        Mention(
            mention_id=int(r["mention_id"]),
            start_token=int(r["start_token"]),
            end_token=int(r["end_token"]),
            entity_id=int(r["entity_id"]),
            text=str(r["text"]),
        )
        for r in _read_jsonl(Path(mentions_path), ("mention_id", "start_token", "end_token", "entity_id", "text"))
    ]

    gold: Optional[tuple[GoldQuote, ...]] = None
    if gold_quotes_path is not None:
        gold = tuple(
            GoldQuote(
                quote_id=int(r["quote_id"]),
                start_token=int(r["start_token"]),
                end_token=int(r["end_token"]),
                speaker_entity_id=int(r["speaker_entity_id"]),
            )
            for r in _read_jsonl(Path(gold_quotes_path), ("quote_id", "start_token", "end_token", "speaker_entity_id"))
        )

    if book_id is None:
        book_id = tokens_path.name.split(".")[0]
    book = AnnotatedBook(book_id=book_id, tokens=tuple(tokens), mentions=tuple(mentions), gold_quotes=gold)

    violations = validate(book)
    if violations:
        raise DanglingReference(f"{book_id}: " + "; ".join(violations))
    return book


def validate(book: AnnotatedBook) -> list[str]:
    """Check every structural invariant; returns one description per violation."""
    problems: list[str] = []
    n = len(book.tokens)
    if n == 0:
        return ["book has no tokens"]

    sentence_of: dict[int, int] = {}
    prev_sent = prev_par = 0
    for i, tok in enumerate(book.tokens):
        if tok.token_id != i:
            problems.append(f"token {tok.token_id}: ids must be 0-based and contiguous (position {i})")
        if tok.sentence_id < prev_sent:
            problems.append(f"token {tok.token_id}: sentence_id decreases")
        if tok.paragraph_id < prev_par:
            problems.append(f"token {tok.token_id}: paragraph_id decreases")
        prev_sent, prev_par = tok.sentence_id, tok.paragraph_id
        sentence_of[tok.token_id] = tok.sentence_id

    for tok in book.tokens:
        if tok.head is None:
            continue
        if tok.head not in sentence_of:
            problems.append(f"token {tok.token_id}: head {tok.head} does not exist")
        elif sentence_of[tok.head] != tok.sentence_id:
            problems.append(f"token {tok.token_id}: head {tok.head} crosses a sentence boundary")

    seen_mention_ids = set()
    for m in book.mentions:
        if m.mention_id in seen_mention_ids:
            problems.append(f"mention {m.mention_id}: duplicate mention_id")
        seen_mention_ids.add(m.mention_id)
        if m.start_token > m.end_token:
            problems.append(f"mention {m.mention_id}: start_token after end_token")
        if m.start_token < 0 or m.end_token >= n:
            problems.append(f"mention {m.mention_id}: span [{m.start_token},{m.end_token}] outside the book")

    if book.gold_quotes is not None:
        entity_ids = book.entity_ids()
        ordered = sorted(book.gold_quotes, key=lambda q: q.start_token)
        for q in book.gold_quotes:
            if q.start_token > q.end_token:
                problems.append(f"gold quote {q.quote_id}: start after end")
            if q.start_token < 0 or q.end_token >= n:
                problems.append(f"gold quote {q.quote_id}: span outside the book")
            if q.speaker_entity_id not in entity_ids:
                problems.append(f"gold quote {q.quote_id}: speaker entity {q.speaker_entity_id} has no mentions")
        for a, b in zip(ordered, ordered[1:]):
            if b.start_token <= a.end_token:
                problems.append(f"gold quotes {a.quote_id} and {b.quote_id} overlap")

    return problems


def save_book(book: AnnotatedBook, tokens_path, mentions_path, gold_quotes_path=None) -> None:
    """Write the bundle back out; inverse of :func:`load_book`."""
    with open(tokens_path, "w", encoding="utf-8") as handle:
        handle.write("\t".join(TOKEN_COLUMNS) + "\n")
        for tok in book.tokens:
            head = -1 if tok.head is None else tok.head
            handle.write(
                f"{tok.token_id}\t{tok.sentence_id}\t{tok.paragraph_id}\t"
                f"{tok.surface}\t{tok.lemma}\t{tok.upos}\t{head}\t{tok.dep_rel}\n"
            )
    with open(mentions_path, "w", encoding="utf-8") as handle:
        for m in book.mentions:
            handle.write(
                json.dumps(
                    {
                        "mention_id": m.mention_id,
                        "start_token": m.start_token,
                        "end_token": m.end_token,
                        "entity_id": m.entity_id,
                        "text": m.text,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    if gold_quotes_path is not None and book.gold_quotes is not None:
        with open(gold_quotes_path, "w", encoding="utf-8") as handle:
            for q in book.gold_quotes:
                handle.write(
                    json.dumps(
                        {
                            "quote_id": q.quote_id,
                            "start_token": q.start_token,
                            "end_token": q.end_token,
                            "speaker_entity_id": q.speaker_entity_id,
                        }
                    )
                    + "\n"
                )


def discover_bundles(corpus_dir) -> list[dict]:
    """Find annotation bundles under a directory.

    Returns one record per ``<book>.tokens.tsv`` with the sibling mention
    and optional gold-quote paths, sorted by book id.
    """
    corpus_dir = Path(corpus_dir)
    bundles = []
    for tokens_path in sorted(corpus_dir.glob("*.tokens.tsv")):
        book_id = tokens_path.name[: -len(".tokens.tsv")]
        mentions_path = corpus_dir / f"{book_id}.mentions.jsonl"
        quotes_path = corpus_dir / f"{book_id}.quotes.jsonl"
        bundles.append(
            {
                "book_id": book_id,
                "tokens": tokens_path,
                "mentions": mentions_path,
                "gold_quotes": quotes_path if quotes_path.exists() else None,
            }
        )
    return bundles
