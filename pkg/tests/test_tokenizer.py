import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccmask.tokenizer import UNK_TOKEN, TokenSequence, WordPieceTokenizer, detokenize

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]


@pytest.fixture(scope="module")
def tok():
    return WordPieceTokenizer.default()


def test_subword_split_with_boundaries():
    t = WordPieceTokenizer(SPECIALS + ["stan", "##ford", "student"])
    seq = t.tokenize("Stanford student")
    assert seq.tokens == ["stan", "##ford", "student"]
    assert seq.word_boundaries == [(0, 2), (2, 3)]


def test_empty_text(tok):
    seq = tok.tokenize("")
    assert seq.tokens == [] and seq.word_boundaries == []


def test_detokenized_spans_reproduce_normalized_words(tok):
    seq = tok.tokenize("The QUICK-thinking student's dog, (allegedly) barked!")
    assert seq.words() == ["the", "quick-thinking", "student's", "dog", "allegedly", "barked"]


def test_punctuation_only_words_dropped(tok):
    seq = tok.tokenize("hello --- ... world")
    assert seq.words() == ["hello", "world"]


def test_unknown_characters_become_unk():
    t = WordPieceTokenizer(SPECIALS + ["a", "##b"])
    seq = t.tokenize("ab abé")
    assert seq.tokens == ["a", "##b", UNK_TOKEN]  # second word has no é piece
    assert seq.word_boundaries == [(0, 2), (2, 3)]


def test_vocab_validation():
    with pytest.raises(ValueError):
        WordPieceTokenizer(SPECIALS + ["dup", "dup"])
    with pytest.raises(ValueError):
        WordPieceTokenizer(["[UNK]", "a"])  # no [MASK]


def test_corruption_candidates_exclude_specials(tok):
    assert not set(SPECIALS) & set(tok.corruption_candidates)
    assert len(tok.corruption_candidates) == tok.vocab_size() - len(SPECIALS)


def test_truncate_keeps_whole_words(tok):
    seq = tok.tokenize("extraordinary cat extraordinary dog")
    cut = seq.truncate(len(seq.tokens) - 1)
    # drops the final word entirely rather than splitting it
    assert cut.words() == seq.words()[:-1]
    assert cut.word_boundaries == seq.word_boundaries[: len(cut.word_boundaries)]
    assert seq.truncate(len(seq.tokens)) is seq


text_strategy = st.text(
    alphabet=st.sampled_from("abcdefgh XY.,!-'7 \t"),
    min_size=0,
    max_size=80,
)


@settings(max_examples=150, deadline=None)
@given(text_strategy)
def test_word_boundaries_partition_tokens(text):
    tok = WordPieceTokenizer.default()
    seq = tok.tokenize(text)
    expected_start = 0
    for start, end in seq.word_boundaries:
        assert start == expected_start
        assert end > start
        expected_start = end
    assert expected_start == len(seq.tokens)


@settings(max_examples=150, deadline=None)
@given(text_strategy)
def test_ascii_words_roundtrip_without_unk(text):
    tok = WordPieceTokenizer.default()
    seq = tok.tokenize(text)
    assert seq.words() == tok.policy.normalize_words(text)


def test_detokenize_strips_continuations():
    assert detokenize(["stan", "##ford"]) == "stanford"
    assert detokenize([]) == ""


def test_token_sequence_word_cache():
    seq = TokenSequence(tokens=["a", "##b"], word_boundaries=[(0, 2)])
    assert seq.words() is seq.words()
