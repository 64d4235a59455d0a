import pytest

from litprop.attribution import Attribution, QuoteAttribution
from litprop.conversation import CharacterNetwork, build_network, segment_dialogue_blocks
from litprop.corpus import AnnotatedBook, Mention
from litprop.quotation import QuotationSpan

from conftest import make_tokens


def dialogue_book(quote_sentences, total_sentences, narration_mentions=()):
    """One token per 'word'; each sentence has 3 tokens; quote sentences get
    a balanced pair around the middle token. narration_mentions:
    (sentence_id, entity_id, inside_quote) adds a PROPN token mention."""
    rows = []
    mentions = []
    spans = []
    for s in range(total_sentences):
        base = len(rows)
        if s in quote_sentences:
            rows.append((s, s, '"', '"', "PUNCT", None, "punct"))
            rows.append((s, s, "word", "word", "NOUN", None, "dep"))
            rows.append((s, s, '"', '"', "PUNCT", None, "punct"))
            spans.append((base, base + 2))
        else:
            rows.append((s, s, "plain", "plain", "ADV", None, "dep"))
            rows.append((s, s, "narration", "narration", "NOUN", None, "dep"))
            rows.append((s, s, ".", ".", "PUNCT", None, "punct"))
        for sent_id, entity, inside in narration_mentions:
            if sent_id == s:
                position = base + 1 if inside and s in quote_sentences else len(rows)
                if not (inside and s in quote_sentences):
                    rows.append((s, s, "Name", "name", "PROPN", None, "nsubj"))
                mentions.append(
                    Mention(mention_id=len(mentions), start_token=position, end_token=position, entity_id=entity, text="Name")
                )
    book = AnnotatedBook("conv", make_tokens(rows), tuple(mentions))
    quotes = [QuotationSpan(quote_id=i, start_token=a, end_token=b) for i, (a, b) in enumerate(spans)]
    return book, quotes


def test_gap_of_three_or_more_splits_blocks():
    book, quotes = dialogue_book({1, 6}, 9)
    blocks = segment_dialogue_blocks(book, quotes)
    assert len(blocks) == 2
    assert (blocks[0].start_sentence, blocks[0].end_sentence) == (1, 1)
    assert (blocks[1].start_sentence, blocks[1].end_sentence) == (6, 6)


def test_small_gap_keeps_one_block():
    book, quotes = dialogue_book({1, 3}, 5)
    blocks = segment_dialogue_blocks(book, quotes)
    assert len(blocks) == 1
    assert (blocks[0].start_sentence, blocks[0].end_sentence) == (1, 3)
    assert blocks[0].quote_ids == (0, 1)


def test_exact_gap_of_two_keeps_one_block():
    book, quotes = dialogue_book({1, 4}, 6)
    assert len(segment_dialogue_blocks(book, quotes)) == 1


def test_all_dialogue_is_one_block():
    book, quotes = dialogue_book({0, 1, 2}, 3)
    assert len(segment_dialogue_blocks(book, quotes)) == 1


def test_no_quotes_no_blocks():
    book, quotes = dialogue_book(set(), 4)
    assert segment_dialogue_blocks(book, quotes) == []


def test_co_presence_from_narration_inside_block():
    # entity 1 named in the narration sentence between two quote sentences
    book, quotes = dialogue_book({1, 3}, 5, narration_mentions=[(2, 1, False)])
    blocks = segment_dialogue_blocks(book, quotes)
    assert blocks[0].co_present_entities == frozenset({1})


def test_mention_inside_quote_not_co_present():
    book, quotes = dialogue_book({1, 3}, 5, narration_mentions=[(1, 1, True)])
    blocks = segment_dialogue_blocks(book, quotes)
    assert blocks[0].co_present_entities == frozenset()


def test_mention_outside_block_range_not_counted():
    book, quotes = dialogue_book({2, 3}, 8, narration_mentions=[(6, 1, False)])
    blocks = segment_dialogue_blocks(book, quotes)
    assert blocks[0].co_present_entities == frozenset()


def test_attributed_speakers_join_co_presence():
    book, quotes = dialogue_book({1, 3}, 5)
    attribution = QuoteAttribution(
        entries={0: Attribution(4, "trigram_matching"), 1: Attribution(9, "majority_fallback")}
    )
    blocks = segment_dialogue_blocks(book, quotes, attribution)
    assert blocks[0].co_present_entities == frozenset({4, 9})


def test_segmentation_ignores_narration_content():
    book_a, quotes_a = dialogue_book({1, 3}, 5)
    book_b, quotes_b = dialogue_book({1, 3}, 5, narration_mentions=[(0, 2, False), (2, 3, False)])
    blocks_a = segment_dialogue_blocks(book_a, quotes_a)
    blocks_b = segment_dialogue_blocks(book_b, quotes_b)
    assert [(b.start_sentence, b.end_sentence) for b in blocks_a] == [
        (b.start_sentence, b.end_sentence) for b in blocks_b
    ]


def blocks_of(*member_sets):
    from litprop.conversation import DialogueBlock

    return [
        DialogueBlock(
            block_id=i,
            start_sentence=i,
            end_sentence=i,
            quote_ids=(i,),
            co_present_entities=frozenset(members),
        )
        for i, members in enumerate(member_sets)
    ]


def test_build_network_single_block_pair():
    net = build_network(None, blocks_of({1, 2}))
    assert net.weight(1, 2) == 1
    assert net.nodes() == [1, 2]


def test_weights_accumulate_across_blocks():
    net = build_network(None, blocks_of({1, 2}, {1, 2, 3}))
    assert net.weight(1, 2) == 2
    assert net.weight(1, 3) == 1
    assert net.weight(2, 3) == 1


def test_lonely_member_becomes_isolated_node():
    net = build_network(None, blocks_of({5}))
    assert net.nodes() == [5]
    assert net.degree(5) == 0


def test_edge_weight_sum_identity():
    member_sets = [{1, 2, 3}, {2, 3}, {1, 4, 5, 6}, {9}]
    net = build_network(None, blocks_of(*member_sets))
    total = sum(w for _, _, w in net.edges())
    expected = sum(len(m) * (len(m) - 1) // 2 for m in member_sets)
    assert total == expected


def test_removing_block_never_increases_weight():
    member_sets = [{1, 2, 3}, {2, 3}, {1, 2}]
    full = build_network(None, blocks_of(*member_sets))
    reduced = build_network(None, blocks_of(*member_sets[:-1]))
    for u, v, w in reduced.edges():
        assert w <= full.weight(u, v)


def test_network_rejects_self_loop():
    net = CharacterNetwork()
    with pytest.raises(ValueError):
        net.add_edge(3, 3)
