import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from chatprofiler.metrics import (
    classify_sentiment,
    completion_rate,
    contains_offensive,
    empathy_level,
    engagement_duration,
    hate_speech_rate,
    informativeness,
    privacy_intrusion_rate,
    repetition_rate,
    response_length,
    score_segment,
    sentiment_breakdown,
    sentiment_score,
)
from chatprofiler.resources import EmpathyLexicon, FrequencyTable, OffensiveLexicon, SentimentLexicon
from chatprofiler.transcript import InterviewConfig
from helpers import bot, seg, user


# -- informativeness ------------------------------------------------------------


def test_informativeness_examples(tiny_freq):
    assert informativeness("", tiny_freq) == 0.0
    assert informativeness("quantum", tiny_freq) == 1.0
    assert informativeness("the the", tiny_freq) == 0.0
    assert informativeness("The QUANTUM!", tiny_freq) == 1.0


VOCAB = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"]
vocab_words = st.sampled_from(VOCAB)
counts_st = st.dictionaries(st.sampled_from(VOCAB[:7]), st.integers(1, 10_000), min_size=1, max_size=7)


@given(counts_st, st.lists(vocab_words, max_size=20))
def test_informativeness_matches_oracle(counts, words):
    ft = FrequencyTable.from_counts(counts)
    assert abs(informativeness(" ".join(words), ft) - oracles.informativeness(words, counts)) <= 1e-12


@given(counts_st, st.lists(vocab_words, max_size=19), st.data())
def test_informativeness_monotone(counts, words, data):
    ft = FrequencyTable.from_counts(counts)
    extra = data.draw(st.sampled_from(sorted(counts)))
    before = informativeness(" ".join(words), ft)
    assert informativeness(" ".join(words + [extra]), ft) >= before


# -- length and duration --------------------------------------------------------------


def test_response_length():
    assert response_length([]) == 0
    assert response_length([user("I am fine")]) == 3
    assert response_length([user("ok"), user("thank you")]) == 3


def test_engagement_duration():
    assert engagement_duration(seg(bot("q", 0), user("a", 90))) == 1.5
    assert engagement_duration(seg(bot("q", 0))) == 0.0
    assert engagement_duration(seg(bot("q", 10.0), user("a", 10.0))) == 0.0


# -- completion -----------------------------------------------------------------------


def test_completion_rate_basic():
    segs = [seg(bot("q"), user("a"), advanced=i < 6, question_id=2) for i in range(8)]
    assert completion_rate(2, segs, corpus_size=20) == 0.75


def test_completion_rate_absent():
    assert completion_rate(2, [seg(bot("q"), question_id=2)], corpus_size=5) is None


def test_completion_rate_q1_conventions():
    # 10 participants, 8 answered Q1, 7 of those moved on
    segs = [seg(bot("q"), user("a"), advanced=i < 7) for i in range(8)]
    assert completion_rate(1, segs, corpus_size=10) == 0.7
    cfg = InterviewConfig.from_dict({"questions": ["q"], "q1_completion_convention": "numerator"})
    assert completion_rate(1, segs, corpus_size=10, cfg=cfg) == 1.0
    assert completion_rate(1, segs, corpus_size=4, cfg=cfg) == 0.5


def test_unanswered_advanced_segment_is_not_completed():
    segs = [seg(bot("q"), advanced=True, question_id=2), seg(bot("q"), user("a"), advanced=True, question_id=2)]
    assert completion_rate(2, segs, corpus_size=2) == 1.0


# -- empathy ---------------------------------------------------------------------------


def test_empathy_examples():
    lex = EmpathyLexicon(frozenset({"sorry"}))
    s = seg(bot("I am sorry to hear that"), user("yeah"))
    assert empathy_level(s, lex) == pytest.approx(1 / 6)
    assert empathy_level(s, EmpathyLexicon(frozenset())) == 0.0
    assert empathy_level(seg(bot("Sorry, sorry!")), lex) == 1.0
    assert empathy_level(seg(user("sorry")), lex) == 0.0


lex_words = st.frozensets(vocab_words, max_size=6)
utterances_st = st.lists(st.lists(vocab_words, min_size=1, max_size=6).map(" ".join), max_size=4)


@given(lex_words, utterances_st)
def test_empathy_matches_oracle(words, utterances):
    s = seg(*(bot(u, i) for i, u in enumerate(utterances)))
    assert abs(empathy_level(s, EmpathyLexicon(words)) - oracles.empathy_level(utterances, words)) <= 1e-12


@given(lex_words, utterances_st.filter(bool), vocab_words)
def test_empathy_monotone(words, utterances, extra):
    if extra in words:
        return
    lex = EmpathyLexicon(words)
    s0 = seg(*(bot(u, i) for i, u in enumerate(utterances)))
    s1 = seg(*(bot(u, i) for i, u in enumerate(utterances[:-1] + [utterances[-1] + " " + extra])))
    assert empathy_level(s1, lex) <= empathy_level(s0, lex)


# -- repetition ------------------------------------------------------------------------


def test_repetition_examples():
    twice = seg(bot("Where are you located?", 0), user("why", 1), bot("Where are you located?", 2))
    assert repetition_rate(twice) == 0.5
    assert repetition_rate(seg(bot("hello there"), bot("good morning"))) == 0.0
    assert repetition_rate(seg(bot("hi"))) == 0.0
    # bigrams never span utterances
    assert repetition_rate(seg(bot("a b"), bot("b a"))) == 0.0


@given(utterances_st)
def test_repetition_matches_oracle(utterances):
    s = seg(*(bot(u, i) for i, u in enumerate(utterances)))
    assert abs(repetition_rate(s) - oracles.repetition_rate(utterances)) <= 1e-12


@given(utterances_st.filter(bool), st.data())
def test_duplicating_an_utterance_does_not_lower_repetition(utterances, data):
    i = data.draw(st.integers(0, len(utterances) - 1))
    s0 = seg(*(bot(u, t) for t, u in enumerate(utterances)))
    doubled = utterances[: i + 1] + [utterances[i]] + utterances[i + 1 :]
    s1 = seg(*(bot(u, t) for t, u in enumerate(doubled)))
    assert repetition_rate(s1) >= repetition_rate(s0)


# -- hate speech ------------------------------------------------------------------------


def test_hate_speech_examples():
    lex = OffensiveLexicon.from_strings(["idiot", "shut up"])
    clean = seg(bot("hello"), bot("how are you"))
    assert hate_speech_rate(clean, lex) == 0.0
    s = seg(bot("one"), bot("you idiot"), bot("three"), bot("four"))
    assert hate_speech_rate(s, lex) == 0.25
    assert contains_offensive("Oh, SHUT   up!", lex)
    assert not contains_offensive("shut the door, up we go", lex)
    assert not contains_offensive("shutup", lex)


@given(st.lists(st.sampled_from(["shut", "up", "you", "x"]), max_size=8))
def test_phrase_matching_matches_brute_force(words):
    lex = OffensiveLexicon.from_strings(["shut up"])
    expected = any(words[i : i + 2] == ["shut", "up"] for i in range(len(words)))
    assert contains_offensive(" ".join(words), lex) == expected


# -- privacy ----------------------------------------------------------------------------


def test_privacy_examples(resources):
    # four words under the shared tokenizer, so one entity gives 1/4
    s = seg(bot("q"), user("my ssn is 123-45-6789"))
    assert privacy_intrusion_rate(s, resources.pii) == 0.25
    assert privacy_intrusion_rate(seg(bot("q"), user("I live in Denver")), resources.pii) == 0.0
    assert privacy_intrusion_rate(seg(bot("q"), user("4111111111111111")), resources.pii) == 1.0
    assert privacy_intrusion_rate(seg(bot("q"), user("4111111111111112")), resources.pii) == 0.0
    assert privacy_intrusion_rate(seg(bot("q")), resources.pii) == 0.0


PII_VOCAB = ["my", "number", "is", "ok", "123-45-6789", "666-12-3456", "jo@mail.com", "4111111111111111",
             "4111111111111112", "5500005555555559", "a-b"]


@given(st.lists(st.lists(st.sampled_from(PII_VOCAB), min_size=1, max_size=5).map(" ".join), max_size=4))
def test_privacy_matches_oracle(resources, utterances):
    s = seg(bot("q", 0), *(user(u, i + 1) for i, u in enumerate(utterances)))
    assert abs(privacy_intrusion_rate(s, resources.pii) - oracles.privacy_rate(utterances)) <= 1e-12


# -- sentiment --------------------------------------------------------------------------


def test_sentiment_examples(resources):
    lex = resources.sentiment
    assert not sentiment_breakdown([], lex).present
    b = sentiment_breakdown([], lex)
    assert (b.positive_frac, b.neutral_frac, b.negative_frac) == (0.0, 0.0, 0.0)
    assert sentiment_breakdown(["I love this chatbot"], lex).positive_frac == 1.0
    assert sentiment_breakdown(["not good at all"], lex).negative_frac == 1.0


def test_sentiment_hand_scored():
    lex = SentimentLexicon({"good": 2.0, "bad": -2.0}, {"very": 0.5}, frozenset({"not"}))
    assert sentiment_score("good", lex) == pytest.approx(2 / math.sqrt(19))
    assert sentiment_score("very good", lex) == pytest.approx(2.5 / math.sqrt(2.5**2 + 15))
    assert sentiment_score("very bad", lex) == pytest.approx(-2.5 / math.sqrt(2.5**2 + 15))
    assert sentiment_score("not really that good", lex) == pytest.approx(-2 / math.sqrt(19))
    assert sentiment_score("not one two three good", lex) > 0
    assert classify_sentiment("meh", lex) == "neutral"


@given(st.lists(st.text(max_size=30), min_size=1, max_size=8))
@settings(max_examples=50)
def test_sentiment_fractions_partition(resources, texts):
    b = sentiment_breakdown(texts, resources.sentiment)
    assert abs(b.positive_frac + b.neutral_frac + b.negative_frac - 1.0) <= 1e-9
    assert all(0.0 <= f <= 1.0 for f in (b.positive_frac, b.neutral_frac, b.negative_frac))


# -- whole vectors -----------------------------------------------------------------------


@given(
    st.lists(
        st.tuples(st.booleans(), st.text(max_size=40), st.floats(0, 1e6, allow_nan=False)), min_size=1, max_size=8
    )
)
@settings(max_examples=100)
def test_score_segment_bounds(resources, rows):
    msgs = sorted(((bot if is_bot else user)(text, t) for is_bot, text, t in rows), key=lambda m: m.timestamp)
    vec = score_segment(seg(bot("q", 0), *msgs), resources)
    for name, value in vec.as_dict().items():
        assert math.isfinite(value), name
        assert value >= 0, name
    for name in ("empathy_level", "repetition_rate", "hate_speech_rate", "privacy_intrusion_rate"):
        assert getattr(vec, name) <= 1.0
