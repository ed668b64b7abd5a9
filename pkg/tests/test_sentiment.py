import pytest
from hypothesis import given, settings, strategies as st

from corisk.exceptions import DataError
from corisk.keywords import KeywordSpec, crisis_sentences
from corisk.parser import Sentence, split_sentences, text_from_string
from corisk.sentiment import Lexicon, load_lexicon, negativity

from conftest import FIXTURES

SPEC = KeywordSpec(("corona", "covid"), {})
PARAGRAPH = FIXTURES / "sentiment" / "paragraph.txt"
PARAGRAPH_LEXICON = FIXTURES / "sentiment" / "lexicon.txt"


def crisis_of(text):
    return crisis_sentences(split_sentences(text_from_string(text).full_text), SPEC)


def test_lexicon_loading(tmp_path):
    path = tmp_path / "lex.txt"
    path.write_text("loss\ndecline\n")
    assert load_lexicon(path).negative_words == {"loss", "decline"}
    path.write_text("loss\nLoss\nloss\n")
    assert len(load_lexicon(path)) == 1
    path.write_text("# only\n# comments\n\n")
    with pytest.raises(DataError):
        load_lexicon(path)


def test_score_examples():
    lex = Lexicon(frozenset({"loss"}))
    score = negativity([Sentence(0, "demand loss", ("demand", "loss"))], lex)
    assert score.score == 0.5
    none = negativity([], lex)
    assert none.score is None and not none.defined and none.crisis_sentence_count == 0


def test_hand_tallied_paragraph():
    # three crisis sentences of 18 + 15 + 17 tokens holding 3 + 3 + 1 lexicon words;
    # the sentence without a crisis word carries negatives that must not count
    lex = load_lexicon(PARAGRAPH_LEXICON)
    score = negativity(crisis_of(PARAGRAPH.read_text()), lex)
    assert (score.negative_token_count, score.total_token_count, score.crisis_sentence_count) == (7, 50, 3)
    assert score.score == 0.14


def test_doubling_the_paragraph_keeps_the_score():
    lex = load_lexicon(PARAGRAPH_LEXICON)
    text = PARAGRAPH.read_text()
    once = negativity(crisis_of(text), lex).score
    twice = negativity(crisis_of(text + "\n" + text), lex).score
    assert abs(once - twice) <= 1e-12


_sentence = st.lists(st.sampled_from(["covid", "corona", "loss", "decline", "demand", "store", "x"]),
                     min_size=1, max_size=10)


def _sents(token_lists):
    return [Sentence(i, " ".join(t), tuple(t)) for i, t in enumerate(token_lists)]


@given(st.lists(_sentence, max_size=10), st.randoms(use_true_random=False))
@settings(max_examples=200, deadline=None)
def test_invariants(token_lists, rnd):
    lex = Lexicon(frozenset({"loss", "decline"}))
    sents = _sents(token_lists)
    base = negativity(sents, lex)
    if base.score is None:
        assert not token_lists
        return
    assert 0.0 <= base.score <= 1.0
    shuffled = list(sents)
    rnd.shuffle(shuffled)
    assert negativity(shuffled, lex).score == pytest.approx(base.score, abs=1e-12)
    assert negativity(sents + sents, lex).score == pytest.approx(base.score, abs=1e-12)
    wider = Lexicon(lex.negative_words | {"absentword"})
    assert negativity(sents, wider).score == base.score
