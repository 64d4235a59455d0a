"""Character-entity determination shared by the network, attribution, and
gender stages.

An entity counts as a character when at least one of its mentions looks
person-like: a proper-name token or a gendered noun/pronoun.
"""

from __future__ import annotations

from .corpus import AnnotatedBook, Mention
from .lexicons import GenderLexicon, load_gender_lexicon


def is_person_like(mention: Mention, book: AnnotatedBook, gender_lexicon: GenderLexicon) -> bool:
    for tid in range(mention.start_token, mention.end_token + 1):
        tok = book.tokens[tid]
        if tok.upos == "PROPN":
            return True
        normalized = GenderLexicon.normalize(tok.surface)
        if normalized in gender_lexicon.gendered() or tok.lemma.lower() in gender_lexicon.gendered():
            return True
    return False


def character_entities(book: AnnotatedBook, gender_lexicon: GenderLexicon | None = None) -> set[int]:
    """Entity ids whose mention chain contains at least one person-like mention."""
    lex = gender_lexicon if gender_lexicon is not None else load_gender_lexicon()
    out: set[int] = set()
    for mention in book.mentions:
        if mention.entity_id in out:
            continue
        if is_person_like(mention, book, lex):
            out.add(mention.entity_id)
    return out
