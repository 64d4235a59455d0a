import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from litprop.corpus import AnnotatedBook, GoldQuote, Mention, Token

REPO_ROOT = Path(__file__).resolve().parent.parent
SYNTHETIC_CORPUS = REPO_ROOT / "corpus" / "synthetic"


def make_tokens(rows):
    """rows: (sentence_id, paragraph_id, surface, lemma, upos, head, dep_rel)."""
    return tuple(
        Token(
            token_id=i,
            sentence_id=r[0],
            paragraph_id=r[1],
            surface=r[2],
            lemma=r[3],
            upos=r[4],
            head=r[5],
            dep_rel=r[6],
        )
        for i, r in enumerate(rows)
    )


def simple_sentence(words, sentence_id=0, paragraph_id=0, start=0):
    """words: (surface, lemma, upos, head offset within sentence or None, rel)."""
    rows = []
    for i, (surface, lemma, upos, head_local, rel) in enumerate(words):
        head = None if head_local is None else start + head_local
        rows.append(
            Token(
                token_id=start + i,
                sentence_id=sentence_id,
                paragraph_id=paragraph_id,
                surface=surface,
                lemma=lemma,
                upos=upos,
                head=head,
                dep_rel=rel,
            )
        )
    return rows


@pytest.fixture
def two_sentence_book():
    """Jane speaks once; one mention of her outside the quote."""
    rows = [
        # sentence 0: " Hello . " said Jane .
        (0, 0, '"', '"', "PUNCT", 2, "punct"),
        (0, 0, "Hello", "hello", "INTJ", 4, "discourse"),
        (0, 0, ".", ".", "PUNCT", 1, "punct"),
        (0, 0, '"', '"', "PUNCT", 2, "punct"),
        (0, 0, "said", "say", "VERB", None, "root"),
        (0, 0, "Jane", "jane", "PROPN", 4, "nsubj"),
        (0, 0, ".", ".", "PUNCT", 4, "punct"),
        # sentence 1: Jane left .
        (1, 1, "Jane", "jane", "PROPN", 8, "nsubj"),
        (1, 1, "left", "leave", "VERB", None, "root"),
        (1, 1, ".", ".", "PUNCT", 8, "punct"),
    ]
    tokens = make_tokens(
        [(s, p, su, le, up, he, re) for (s, p, su, le, up, he, re) in rows]
    )
    mentions = (
        Mention(mention_id=0, start_token=5, end_token=5, entity_id=7, text="Jane"),
        Mention(mention_id=1, start_token=7, end_token=7, entity_id=7, text="Jane"),
    )
    gold = (GoldQuote(quote_id=0, start_token=0, end_token=3, speaker_entity_id=7),)
    return AnnotatedBook(book_id="fixture", tokens=tokens, mentions=mentions, gold_quotes=gold)
