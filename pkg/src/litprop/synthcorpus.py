"""Deterministic synthetic corpus with planted propagation triads.

Each generated book is a fully annotated bundle (tokens with dependency
arcs, coreference mentions, gold quotes) scripted so that the set of
implicit and explicit propagation triads is known by construction. The
plant manifest is derived from the generator's own block bookkeeping,
never from the detectors, so it can serve as an oracle for them.

Run ``python -m litprop.synthcorpus <outdir>`` to (re)generate the bundle
files plus ``plants.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import AnnotatedBook, GoldQuote, Mention, Token, save_book
from .lexicons import load_report_verbs, load_topic_lexicon

# surface, lemma pairs
TOPIC_VERBS = {
    "shoot": ("shot", "shoot"),
    "kill": ("killed", "kill"),
    "hit": ("hit", "hit"),
    "hurt": ("hurt", "hurt"),
    "love": ("loved", "love"),
    "arrest": ("arrested", "arrest"),
    "escape": ("escaped", "escape"),
}
COPULAR_TOPICS = {"sick": ("sick", "sick"), "dead": ("dead", "dead"), "guilty": ("guilty", "guilty")}
REPORT_VERBS = {
    "tell": ("told", "tell"),
    "say": ("said", "say"),
    "mention": ("mentioned", "mention"),
    "declare": ("declared", "declare"),
    "claim": ("claimed", "claim"),
}
TAG_VERBS = [("said", "say"), ("replied", "reply"), ("cried", "cry"), ("answered", "answer"), ("asked", "ask")]

MALE_NAMES = ["Jack", "Tom", "Ben", "Hugh", "Felix", "Oscar", "Peter", "Ralph", "Simon", "Noel"]
FEMALE_NAMES = ["Anna", "Cara", "Dora", "Emma", "Flora", "Grace", "Irene", "Julia", "Lucy", "Maud"]

PLAIN_CONTENTS = [
    [("The", "the", "DET", 1, "det"), ("rain", "rain", "NOUN", 2, "nsubj"), ("falls", "fall", "VERB", None, "root"), (".", ".", "PUNCT", 2, "punct")],
    [("The", "the", "DET", 1, "det"), ("fire", "fire", "NOUN", 2, "nsubj"), ("burns", "burn", "VERB", None, "root"), ("low", "low", "ADV", 2, "advmod"), (".", ".", "PUNCT", 2, "punct")],
    [("We", "we", "PRON", 2, "nsubj"), ("must", "must", "AUX", 2, "aux"), ("go", "go", "VERB", None, "root"), ("home", "home", "ADV", 2, "advmod"), (".", ".", "PUNCT", 2, "punct")],
    [("The", "the", "DET", 1, "det"), ("road", "road", "NOUN", 2, "nsubj"), ("looks", "look", "VERB", None, "root"), ("long", "long", "ADJ", 2, "xcomp"), (".", ".", "PUNCT", 2, "punct")],
    [("Night", "night", "NOUN", 1, "nsubj"), ("comes", "come", "VERB", None, "root"), ("early", "early", "ADV", 1, "advmod"), (".", ".", "PUNCT", 1, "punct")],
]

INNER_CLAUSES = [
    # (tokens relative to inner verb, inner verb surface/lemma); subject is a bare noun
    ("letter", ("vanished", "vanish")),
    ("bridge", ("creaked", "creak")),
    ("well", ("froze", "freeze")),
    ("gate", ("rattled", "rattle")),
]

FILLERS = [
    [("The", "the", "DET", 1, "det"), ("wind", "wind", "NOUN", 2, "nsubj"), ("rose", "rise", "VERB", None, "root"), ("over", "over", "ADP", 5, "case"), ("the", "the", "DET", 5, "det"), ("fields", "field", "NOUN", 2, "obl"), (".", ".", "PUNCT", 2, "punct")],
    [("Rain", "rain", "NOUN", 1, "nsubj"), ("fell", "fall", "VERB", None, "root"), ("through", "through", "ADP", 4, "case"), ("the", "the", "DET", 4, "det"), ("night", "night", "NOUN", 1, "obl"), (".", ".", "PUNCT", 1, "punct")],
    [("The", "the", "DET", 1, "det"), ("lane", "lane", "NOUN", 2, "nsubj"), ("lay", "lie", "VERB", None, "root"), ("empty", "empty", "ADJ", 2, "xcomp"), (".", ".", "PUNCT", 2, "punct")],
    [("Smoke", "smoke", "NOUN", 1, "nsubj"), ("drifted", "drift", "VERB", None, "root"), ("from", "from", "ADP", 4, "case"), ("the", "the", "DET", 4, "det"), ("chimneys", "chimney", "NOUN", 1, "obl"), (".", ".", "PUNCT", 1, "punct")],
]


@dataclass
class _Character:
    name: str
    gender: str  # "F" or "M"
    entity_id: int

    @property
    def pronoun(self) -> str:
        return "She" if self.gender == "F" else "He"


@dataclass
class _PlantedImplicit:
    a: int
    b: int
    c: int
    subject: int
    verb: str
    object: int | None
    origin_block: int
    repeat_block: int
    b_prime: int


@dataclass
class _PlantedExplicit:
    a: int
    b: int
    listeners: tuple[int, ...]
    quote_index: int
    verb: str


class _BookBuilder:
    def __init__(self, book_id: str):
        self.book_id = book_id
        self.tokens: list[Token] = []
        self.mentions: list[Mention] = []
        self.quotes: list[GoldQuote] = []
        self.sentence_id = -1
        self.block_members: list[set[int]] = []  # generator-side co-presence bookkeeping
        self.topic_voicings: list[tuple] = []  # (key, speaker, block_index, quote_index)
        self.speakers_seen: set[int] = set()

    def add_sentence(self, words, mention_spans=()) -> int:
        """words: (surface, lemma, upos, head_local|None, dep_rel); returns base offset."""
        self.sentence_id += 1
        base = len(self.tokens)
        for i, (surface, lemma, upos, head_local, dep_rel) in enumerate(words):
            head = None if head_local is None else base + head_local
            self.tokens.append(
                Token(
                    token_id=base + i,
                    sentence_id=self.sentence_id,
                    paragraph_id=self.sentence_id,
                    surface=surface,
                    lemma=lemma,
                    upos=upos,
                    head=head,
                    dep_rel=dep_rel,
                )
            )
        for start_local, end_local, entity_id, text in mention_spans:
            self.mentions.append(
                Mention(
                    mention_id=len(self.mentions),
                    start_token=base + start_local,
                    end_token=base + end_local,
                    entity_id=entity_id,
                    text=text,
                )
            )
        return base

    def intro(self, char: _Character) -> None:
        base_words = [
            (char.name, char.name.lower(), "PROPN", 1, "nsubj"),
            ("lived", "live", "VERB", None, "root"),
            ("near", "near", "ADP", 4, "case"),
            ("the", "the", "DET", 4, "det"),
            ("mill", "mill", "NOUN", 1, "obl"),
            (".", ".", "PUNCT", 1, "punct"),
        ]
        self.add_sentence(base_words, [(0, 0, char.entity_id, char.name)])
        pron_words = [
            (char.pronoun, char.pronoun.lower(), "PRON", 1, "nsubj"),
            ("kept", "keep", "VERB", None, "root"),
            ("the", "the", "DET", 3, "det"),
            ("garden", "garden", "NOUN", 1, "obj"),
            (".", ".", "PUNCT", 1, "punct"),
        ]
        self.add_sentence(pron_words, [(0, 0, char.entity_id, char.pronoun)])

    def filler(self, count: int) -> None:
        for i in range(count):
            self.add_sentence(FILLERS[(self.sentence_id + i) % len(FILLERS)])

    def quote_sentence(self, content, content_mentions, speaker: _Character, listeners=()) -> int:
        """One-sentence paragraph: `` " content " said Speaker [to X and Y] . ``

        Returns the quote index (document order). content heads are local
        to the content list; its root must use head None.
        """
        words: list = []
        mentions: list = []
        root_local = next(i for i, w in enumerate(content) if w[3] is None)
        open_idx = 0
        words.append(('"', '"', "PUNCT", 1 + root_local, "punct"))
        for surface, lemma, upos, head_local, dep_rel in content:
            head = None if head_local is None else 1 + head_local
            words.append((surface, lemma, upos, head, dep_rel))
        close_idx = len(words)
        said_idx = close_idx + 1
        words.append(('"', '"', "PUNCT", 1 + root_local, "punct"))
        tag_surface, tag_lemma = TAG_VERBS[len(self.quotes) % len(TAG_VERBS)]
        words.append((tag_surface, tag_lemma, "VERB", None, "root"))
        words.append((speaker.name, speaker.name.lower(), "PROPN", said_idx, "nsubj"))
        mentions.append((said_idx + 1, said_idx + 1, speaker.entity_id, speaker.name))
        # content root attaches to the tag verb
        words[1 + root_local] = (*words[1 + root_local][:3], said_idx, "ccomp")
        cursor = said_idx + 2
        if listeners:
            words.append(("to", "to", "ADP", cursor + 1, "case"))
            first = listeners[0]
            words.append((first.name, first.name.lower(), "PROPN", said_idx, "obl"))
            mentions.append((cursor + 1, cursor + 1, first.entity_id, first.name))
            prev_idx = cursor + 1
            cursor += 2
            for extra in listeners[1:]:
                words.append(("and", "and", "CCONJ", cursor + 1, "cc"))
                words.append((extra.name, extra.name.lower(), "PROPN", prev_idx, "conj"))
                mentions.append((cursor + 1, cursor + 1, extra.entity_id, extra.name))
                prev_idx = cursor + 1
                cursor += 2
        words.append((".", ".", "PUNCT", said_idx, "punct"))

        for start_local, end_local, entity_id, text in content_mentions:
            mentions.append((1 + start_local, 1 + end_local, entity_id, text))
        base = self.add_sentence(words, mentions)
        quote_index = len(self.quotes)
        self.quotes.append(
            GoldQuote(
                quote_id=quote_index,
                start_token=base + open_idx,
                end_token=base + close_idx,
                speaker_entity_id=speaker.entity_id,
            )
        )
        self.speakers_seen.add(speaker.entity_id)
        return quote_index

    def start_block(self) -> int:
        self.block_members.append(set())
        return len(self.block_members) - 1

    def note_presence(self, block_index: int, *chars: _Character) -> None:
        self.block_members[block_index].update(c.entity_id for c in chars)

    def book(self) -> AnnotatedBook:
        return AnnotatedBook(
            book_id=self.book_id,
            tokens=tuple(self.tokens),
            mentions=tuple(self.mentions),
            gold_quotes=tuple(self.quotes),
        )


def _content_svo(subj: _Character, verb_key: str, obj: _Character | None):
    vs, vl = TOPIC_VERBS[verb_key]
    words = [(subj.name, subj.name.lower(), "PROPN", 1, "nsubj"), (vs, vl, "VERB", None, "root")]
    mentions = [(0, 0, subj.entity_id, subj.name)]
    if obj is not None:
        words.append((obj.name, obj.name.lower(), "PROPN", 1, "obj"))
        mentions.append((2, 2, obj.entity_id, obj.name))
    words.append((".", ".", "PUNCT", 1, "punct"))
    key = (subj.entity_id, vl, obj.entity_id if obj is not None else None)
    return words, mentions, key


def _content_svo_pronoun(subj: _Character, verb_key: str, obj: _Character | None):
    vs, vl = TOPIC_VERBS[verb_key]
    words = [(subj.pronoun, subj.pronoun.lower(), "PRON", 1, "nsubj"), (vs, vl, "VERB", None, "root")]
    mentions = [(0, 0, subj.entity_id, subj.pronoun)]
    if obj is not None:
        words.append((obj.name, obj.name.lower(), "PROPN", 1, "obj"))
        mentions.append((2, 2, obj.entity_id, obj.name))
    words.append((".", ".", "PUNCT", 1, "punct"))
    key = (subj.entity_id, vl, obj.entity_id if obj is not None else None)
    return words, mentions, key


def _content_passive(subj: _Character, verb_key: str, obj: _Character):
    """`Obj was verbed by Subj .` carries the same key as the active form."""
    vs, vl = TOPIC_VERBS[verb_key]
    words = [
        (obj.name, obj.name.lower(), "PROPN", 2, "nsubj:pass"),
        ("was", "be", "AUX", 2, "aux:pass"),
        (vs, vl, "VERB", None, "root"),
        ("by", "by", "ADP", 4, "case"),
        (subj.name, subj.name.lower(), "PROPN", 2, "obl:agent"),
        (".", ".", "PUNCT", 2, "punct"),
    ]
    mentions = [(0, 0, obj.entity_id, obj.name), (4, 4, subj.entity_id, subj.name)]
    key = (subj.entity_id, vl, obj.entity_id)
    return words, mentions, key


def _content_copular(subj: _Character, adj_key: str, pronoun: bool = False):
    surface, lemma = COPULAR_TOPICS[adj_key]
    head_word = (subj.pronoun, subj.pronoun.lower(), "PRON") if pronoun else (subj.name, subj.name.lower(), "PROPN")
    words = [
        (*head_word, 2, "nsubj"),
        ("was", "be", "AUX", 2, "cop"),
        (surface, lemma, "ADJ", None, "root"),
        (".", ".", "PUNCT", 2, "punct"),
    ]
    mentions = [(0, 0, subj.entity_id, head_word[0])]
    key = (subj.entity_id, lemma, None)
    return words, mentions, key


def _content_plain(index: int):
    return PLAIN_CONTENTS[index % len(PLAIN_CONTENTS)], []


def _content_report(src: _Character, report_key: str, inner_index: int, inner_char: _Character | None = None):
    """`Src told me that ... .` with the reported clause under the report verb."""
    vs, vl = REPORT_VERBS[report_key]
    words = [
        (src.name, src.name.lower(), "PROPN", 1, "nsubj"),
        (vs, vl, "VERB", None, "root"),
        ("me", "i", "PRON", 1, "iobj"),
    ]
    mentions = [(0, 0, src.entity_id, src.name)]
    if inner_char is not None:
        # paper-style reported clause about a character: "that X escaped"
        words.extend(
            [
                ("that", "that", "SCONJ", 5, "mark"),
                (inner_char.name, inner_char.name.lower(), "PROPN", 5, "nsubj"),
                ("escaped", "escape", "VERB", 1, "ccomp"),
                (".", ".", "PUNCT", 1, "punct"),
            ]
        )
        mentions.append((4, 4, inner_char.entity_id, inner_char.name))
        inner_key = (inner_char.entity_id, "escape", None)
    else:
        noun, (ivs, ivl) = INNER_CLAUSES[inner_index % len(INNER_CLAUSES)]
        words.extend(
            [
                ("that", "that", "SCONJ", 6, "mark"),
                ("the", "the", "DET", 5, "det"),
                (noun, noun, "NOUN", 6, "nsubj"),
                (ivs, ivl, "VERB", 1, "ccomp"),
                (".", ".", "PUNCT", 1, "punct"),
            ]
        )
        inner_key = None
    return words, mentions, vl, inner_key


# Per-book scripts: plant roles (A, B, W, C) index on-stage characters 0-5;
# "witness_in_repeat" keeps W co-present at the repetition; gatherings are
# plant-free blocks (indexes 0-7, where 6 and 7 are connector characters)
# that hang pendants and bridges off the plant cliques so the node
# measures genuinely vary across characters.
_BOOK_SHAPES = [
    {
        "plants": [(0, 1, 2, 3), (2, 3, 4, 5), (4, 5, 0, 1), (1, 2, 3, 4)],
        "witness_in_repeat": [True, False, True, False],
        "gatherings": [(0, 1, 2, 3), (5, 6), (6, 7)],
    },
    {
        "plants": [(0, 1, 2, 3), (1, 2, 4, 5), (4, 5, 0, 2), (3, 4, 1, 0)],
        "witness_in_repeat": [False, True, False, True],
        "gatherings": [(1, 2, 3, 4, 5), (0, 6), (6, 7)],
    },
    {
        "plants": [(5, 4, 3, 2), (0, 2, 4, 1), (1, 3, 5, 0), (2, 4, 0, 5)],
        "witness_in_repeat": [True, False, False, True],
        "gatherings": [(0, 1, 2), (3, 6), (5, 6, 7)],
    },
    {
        "plants": [(0, 1, 2, 3), (2, 3, 4, 5), (4, 5, 0, 1), (1, 2, 3, 4)],
        "witness_in_repeat": [False, False, True, True],
        "gatherings": [(0, 2, 4), (1, 3), (4, 6), (6, 7)],
    },
    {
        "plants": [(3, 2, 1, 0), (5, 0, 1, 2), (2, 4, 5, 3), (0, 3, 4, 1)],
        "witness_in_repeat": [True, True, False, False],
        "gatherings": [(1, 3, 5), (0, 4), (2, 6), (6, 7)],
    },
    {
        # two disjoint-role plants keep (1,2) and (4,5) structurally
        # equivalent: identical features with opposite labels rule out
        # separation of the corpus-level regression
        "plants": [(0, 1, 2, 3), (3, 4, 5, 0)],
        "witness_in_repeat": [True, True],
        "gatherings": [(0, 3), (0, 6), (6, 7)],
    },
]

_PLANT_VERBS = [
    ("shoot", "pronoun"),
    ("love", "passive"),
    ("arrest", "plain"),
    ("hurt", "plain"),
    ("kill", "pronoun"),
    ("hit", "passive"),
    ("escape", "plain"),
]
_COPULAR_BOOKS = {2: "sick", 4: "dead"}  # book index -> adjective for plant shape 3


@dataclass
class SyntheticBook:
    book: AnnotatedBook
    implicit: list[_PlantedImplicit] = field(default_factory=list)
    explicit: list[_PlantedExplicit] = field(default_factory=list)


def _build_book(book_index: int, book_id: str) -> SyntheticBook:
    male = (MALE_NAMES + MALE_NAMES)[book_index * 2 : book_index * 2 + 5]
    female = (FEMALE_NAMES + FEMALE_NAMES)[book_index * 2 : book_index * 2 + 5]
    names: list[tuple[str, str]] = []
    for i in range(5):
        names.append((male[i], "M"))
        names.append((female[i], "F"))
    cast = [_Character(name, gender, entity_id) for entity_id, (name, gender) in enumerate(names)]
    stage, offstage = cast[:8], cast[8:]

    builder = _BookBuilder(book_id)
    for char in cast:
        builder.intro(char)
    builder.filler(3)

    shape = _BOOK_SHAPES[book_index % len(_BOOK_SHAPES)]
    result = SyntheticBook(book=None)  # type: ignore[arg-type]
    report_round = 0

    for plant_no, (ai, bi, wi, ci) in enumerate(shape["plants"]):
        a, b, w, c = stage[ai], stage[bi], stage[wi], stage[ci]
        verb_key, repeat_style = _PLANT_VERBS[(book_index + plant_no) % len(_PLANT_VERBS)]
        subj, obj = (offstage[0], offstage[1]) if plant_no % 2 == 0 else (offstage[1], offstage[0])
        copular_adj = _COPULAR_BOOKS.get(book_index) if plant_no == 3 else None
        if verb_key == "escape":
            # keep clear of the bonus block's reported escape about offstage[0]
            subj, obj = offstage[1], None

        # origin block: A voices the proposition with B and W listening
        origin_index = builder.start_block()
        if copular_adj is not None:
            content, content_mentions, key = _content_copular(subj, copular_adj)
        else:
            content, content_mentions, key = _content_svo(subj, verb_key, obj)
        q_origin = builder.quote_sentence(content, content_mentions, a, (b, w))
        builder.note_presence(origin_index, a, b, w)
        builder.topic_voicings.append((key, a.entity_id, origin_index, q_origin))
        if plant_no % 2 == 0:
            rwords, rmentions, rverb, _ = _content_report(
                offstage[plant_no % 2], list(REPORT_VERBS)[report_round % len(REPORT_VERBS)], report_round
            )
            qi = builder.quote_sentence(rwords, rmentions, w, ())
            result.explicit.append(
                _PlantedExplicit(
                    a=offstage[plant_no % 2].entity_id,
                    b=w.entity_id,
                    listeners=tuple(sorted(builder.block_members[origin_index] - {w.entity_id})),
                    quote_index=qi,
                    verb=rverb,
                )
            )
            report_round += 1
        else:
            builder.quote_sentence(*_content_plain(plant_no), speaker=w)
        builder.filler(3 + (plant_no % 2))

        # repeat block: B repeats it to C (W co-present again in some books)
        repeat_index = builder.start_block()
        if copular_adj is not None:
            rep_content, rep_mentions, rep_key = _content_copular(subj, copular_adj, pronoun=True)
        elif repeat_style == "pronoun":
            rep_content, rep_mentions, rep_key = _content_svo_pronoun(subj, verb_key, obj)
        elif repeat_style == "passive":
            rep_content, rep_mentions, rep_key = _content_passive(subj, verb_key, obj)
        else:
            rep_content, rep_mentions, rep_key = _content_svo(subj, verb_key, obj)
        assert rep_key == key, f"repeat content changes the tuple key: {rep_key} vs {key}"
        repeat_listeners = (c, w) if shape["witness_in_repeat"][plant_no] else (c,)
        q_repeat = builder.quote_sentence(rep_content, rep_mentions, b, repeat_listeners)
        builder.note_presence(repeat_index, b, *repeat_listeners)
        builder.topic_voicings.append((key, b.entity_id, repeat_index, q_repeat))
        if plant_no % 2 == 1:
            rwords, rmentions, rverb, _ = _content_report(
                offstage[plant_no % 2], list(REPORT_VERBS)[report_round % len(REPORT_VERBS)], report_round
            )
            qi = builder.quote_sentence(rwords, rmentions, c, ())
            result.explicit.append(
                _PlantedExplicit(
                    a=offstage[plant_no % 2].entity_id,
                    b=c.entity_id,
                    listeners=tuple(sorted(builder.block_members[repeat_index] - {c.entity_id})),
                    quote_index=qi,
                    verb=rverb,
                )
            )
            report_round += 1
        else:
            builder.quote_sentence(*_content_plain(plant_no + 2), speaker=c)
        builder.filler(3 + (plant_no % 2))

        result.implicit.append(
            _PlantedImplicit(
                a=a.entity_id,
                b=b.entity_id,
                c=c.entity_id,
                subject=key[0],
                verb=key[1],
                object=key[2],
                origin_block=origin_index,
                repeat_block=repeat_index,
                b_prime=w.entity_id,
            )
        )

    # plant-free gathering blocks roughen the network: without them every
    # book collapses into a vertex-transitive graph and the node measures
    # carry no information
    for g_no, gathering in enumerate(shape["gatherings"]):
        members = [stage[i] for i in gathering]
        gathering_index = builder.start_block()
        builder.quote_sentence(
            *_content_plain(book_index + g_no + 1), speaker=members[0], listeners=tuple(members[1:])
        )
        builder.quote_sentence(*_content_plain(book_index + g_no + 3), speaker=members[1])
        builder.note_presence(gathering_index, *members)
        builder.filler(4)

    # paper-style explicit plant about an off-stage escape, once per book
    bonus_index = builder.start_block()
    speaker, listener = stage[5], stage[0]
    rwords, rmentions, rverb, inner_key = _content_report(offstage[1], "tell", 0, inner_char=offstage[0])
    qi = builder.quote_sentence(rwords, rmentions, speaker, (listener,))
    builder.note_presence(bonus_index, speaker, listener)
    builder.topic_voicings.append((inner_key, speaker.entity_id, bonus_index, qi))
    builder.quote_sentence(*_content_plain(book_index), speaker=listener)
    result.explicit.append(
        _PlantedExplicit(
            a=offstage[1].entity_id,
            b=speaker.entity_id,
            listeners=(listener.entity_id,),
            quote_index=qi,
            verb=rverb,
        )
    )
    builder.filler(3)

    _check_plants(builder, result)
    result.book = builder.book()
    return result


def _check_plants(builder: _BookBuilder, result: SyntheticBook) -> None:
    """Construction-time guarantees that the manifest is exactly detectable."""
    members = builder.block_members
    voiced: dict[tuple, list[tuple]] = {}
    for key, speaker, block_index, quote_index in builder.topic_voicings:
        voiced.setdefault(key, []).append((block_index, speaker))

    plant_keys = set()
    for plant in result.implicit:
        key = (plant.subject, plant.verb, plant.object)
        plant_keys.add(key)
        origin, repeat = members[plant.origin_block], members[plant.repeat_block]
        assert plant.a != plant.b and plant.b != plant.c
        assert plant.b in origin and plant.b_prime in origin
        assert plant.c not in origin, "C must be absent from the origin block"
        assert repeat - origin - {plant.b} == {plant.c}, "exactly one fresh listener per plant"
        assert voiced[key] == [(plant.origin_block, plant.a), (plant.repeat_block, plant.b)]
        assert plant.b_prime in builder.speakers_seen

    topic_words = load_topic_lexicon().all_words()
    for key, voicings in voiced.items():
        assert key[1] in topic_words
        if key not in plant_keys:
            assert len(voicings) == 1, f"non-plant topic key voiced twice: {key}"

    report_lemmas = load_report_verbs()
    planted_quotes = {p.quote_index for p in result.explicit}
    book = builder.book()
    for quote in builder.quotes:
        has_report = any(
            book.tokens[t].upos == "VERB" and book.tokens[t].lemma in report_lemmas
            for t in range(quote.start_token + 1, quote.end_token)
        )
        assert has_report == (quote.quote_id in planted_quotes)


def generate_corpus(out_dir, books: int = 6) -> dict:
    """Write bundles plus plants.json; returns the manifest dictionary."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest: dict = {"books": {}, "totals": {"implicit": 0, "explicit_events": 0, "explicit_triads": 0}}
    for index in range(books):
        book_id = f"book_{index:02d}"
        synthetic = _build_book(index, book_id)
        save_book(
            synthetic.book,
            out_dir / f"{book_id}.tokens.tsv",
            out_dir / f"{book_id}.mentions.jsonl",
            out_dir / f"{book_id}.quotes.jsonl",
        )
        manifest["books"][book_id] = {
            "implicit": [
                {
                    "a": p.a,
                    "b": p.b,
                    "c": p.c,
                    "subject": p.subject,
                    "verb": p.verb,
                    "object": p.object,
                    "origin_block": p.origin_block,
                    "repeat_block": p.repeat_block,
                    "b_prime": p.b_prime,
                }
                for p in synthetic.implicit
            ],
            "explicit": [
                {
                    "a": p.a,
                    "b": p.b,
                    "listeners": list(p.listeners),
                    "quote_id": p.quote_index,
                    "verb": p.verb,
                }
                for p in synthetic.explicit
            ],
        }
        manifest["totals"]["implicit"] += len(synthetic.implicit)
        manifest["totals"]["explicit_events"] += len(synthetic.explicit)
        manifest["totals"]["explicit_triads"] += sum(len(p.listeners) for p in synthetic.explicit)
    with open(out_dir / "plants.json", "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return manifest


def main(argv=None) -> int:
    import argparse

    parser = argparse.ArgumentParser(description="Generate the planted synthetic corpus")
    parser.add_argument("out_dir", help="directory for the bundle files and plants.json")
    parser.add_argument("--books", type=int, default=6)
    args = parser.parse_args(argv)
    manifest = generate_corpus(args.out_dir, args.books)
    totals = manifest["totals"]
    print(
        f"wrote {len(manifest['books'])} books: "
        f"{totals['implicit']} implicit plants, "
        f"{totals['explicit_events']} explicit plants ({totals['explicit_triads']} triads)"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
