import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chatprofiler.errors import InputError
from chatprofiler.transcript import (
    InterviewConfig,
    Message,
    Role,
    Session,
    extract_ratings,
    load_config,
    parse_corpus,
    segment_session,
    serialize_corpus,
)
from helpers import bot, user


def line(**obj):
    return json.dumps(obj)


def test_parse_minimal_session():
    src = line(
        session_id="a",
        messages=[
            {"role": "bot", "text": "How are you feeling today?", "timestamp": 0},
            {"role": "user", "text": "fine", "timestamp": 3.5},
        ],
    )
    (s,) = parse_corpus(src.encode())
    assert s.session_id == "a"
    assert len(s.messages) == 2
    assert s.messages[1].role is Role.USER and s.messages[1].timestamp == 3.5


def test_parse_empty_stream():
    assert parse_corpus(b"") == []
    assert parse_corpus(iter([])) == []


def test_bad_role_names_line_and_role():
    src = line(session_id="a", messages=[{"role": "agent", "text": "hi", "timestamp": 0}])
    with pytest.raises(InputError) as exc:
        parse_corpus(src)
    assert exc.value.line == 1
    assert "'agent'" in str(exc.value) and "line 1" in str(exc.value)


@pytest.mark.parametrize(
    "message, fragment",
    [
        ({"role": "bot", "timestamp": 0}, "text"),
        ({"role": "bot", "text": "hi"}, "timestamp"),
        ({"role": "bot", "text": "hi", "timestamp": -1}, "timestamp"),
        ({"role": "bot", "text": "hi", "timestamp": 0, "question_id": 0}, "question_id"),
    ],
)
def test_missing_or_invalid_fields(message, fragment):
    good = line(session_id="ok", messages=[])
    bad = line(session_id="b", messages=[message])
    with pytest.raises(InputError) as exc:
        parse_corpus(f"{good}\n{bad}\n")
    assert exc.value.line == 2
    assert fragment in str(exc.value)


def test_malformed_json_line_number():
    with pytest.raises(InputError) as exc:
        parse_corpus('{"session_id": "a", "messages": []}\n{oops\n')
    assert exc.value.line == 2


def test_collect_errors_mode():
    src = "\n".join(
        [
            line(session_id="a", messages=[]),
            line(session_id="b", messages=[{"role": "agent", "text": "x", "timestamp": 0}]),
            "not json",
        ]
    )
    errors = []
    sessions = parse_corpus(src, errors)
    assert [s.session_id for s in sessions] == ["a"]
    assert [e.line for e in errors] == [2, 3]


def test_unknown_fields_ignored_and_messages_sorted():
    src = line(
        session_id="a",
        extra={"x": 1},
        messages=[
            {"role": "user", "text": "second", "timestamp": 5, "meta": 1},
            {"role": "bot", "text": "first", "timestamp": 1},
            {"role": "bot", "text": "tie-a", "timestamp": 5},
        ],
    )
    (s,) = parse_corpus(src)
    assert [m.text for m in s.messages] == ["first", "second", "tie-a"]


def test_duplicate_session_id_rejected():
    src = line(session_id="a", messages=[]) + "\n" + line(session_id="a", messages=[])
    with pytest.raises(InputError, match="duplicate"):
        parse_corpus(src)


def test_rating_out_of_range_rejected_on_parse():
    with pytest.raises(InputError):
        parse_corpus(line(session_id="a", messages=[], satisfaction_rating=7))


message_st = st.builds(
    Message,
    role=st.sampled_from(list(Role)),
    text=st.text(max_size=20),
    timestamp=st.floats(min_value=0, max_value=1e9, allow_nan=False, allow_infinity=False),
    question_id=st.none() | st.integers(min_value=1, max_value=9),
)


@st.composite
def sessions_st(draw):
    n = draw(st.integers(min_value=0, max_value=4))
    out = []
    for i in range(n):
        msgs = sorted(draw(st.lists(message_st, max_size=6)), key=lambda m: m.timestamp)
        out.append(
            Session(
                f"s{i}",
                tuple(msgs),
                draw(st.none() | st.integers(1, 5)),
                draw(st.none() | st.integers(1, 5)),
                tuple(draw(st.lists(st.text(max_size=10), max_size=2))),
            )
        )
    return out


@given(sessions_st())
@settings(max_examples=60)
def test_round_trip(corpus):
    assert parse_corpus(serialize_corpus(corpus).encode("utf-8")) == corpus


# -- segmentation -------------------------------------------------------------


@pytest.fixture
def cfg3():
    return InterviewConfig.from_dict(
        {"questions": ["How are you feeling today?", "Where are you located?", "What do you do outside work?"]}
    )


def test_explicit_question_ids(cfg3):
    s = Session(
        "a",
        (
            bot("How are you?", 0, 1),
            user("good", 1, 1),
            bot("Where?", 2, 2),
            user("Boulder", 3, 2),
        ),
    )
    segs = segment_session(s, cfg3)
    assert [g.question_id for g in segs] == [1, 2]
    assert [g.advanced for g in segs] == [True, False]


def test_fuzzy_match_opens_segment_for_drifted_question(cfg3):
    s = Session(
        "a",
        (
            bot("Hi there! How are you feeling today?", 0),
            user("ok", 1),
            bot("Where you are located?", 2),
            user("Denver", 3),
        ),
    )
    segs = segment_session(s, cfg3)
    assert [g.question_id for g in segs] == [1, 2]
    assert all(m.question_id == 2 for m in segs[1].messages)
    assert segs[1].messages[0].text == "Where you are located?"


def test_reasked_question_stays_in_segment(cfg3):
    s = Session(
        "a",
        (
            bot("How are you feeling today?", 0),
            user("fine", 1),
            bot("Where are you located?", 2),
            user("You tell me first.", 3),
            bot("Where are you located?", 4),
            user("What about you?", 5),
        ),
    )
    segs = segment_session(s, cfg3)
    assert len(segs) == 2
    assert len(segs[1].bot_messages) == 2


def test_full_interview_then_ratings_all_advanced(covid_config):
    from conftest import COVID_QUESTIONS

    msgs = []
    t = 0
    for q in COVID_QUESTIONS:
        msgs += [bot(q, t), user("answer", t + 1)]
        t += 2
    msgs += [bot(covid_config.question_text(6), t), user("4", t + 1)]
    segs = segment_session(Session("a", tuple(msgs)), covid_config)
    assert len(segs) == 5
    assert all(g.advanced for g in segs)


def test_last_question_without_post_messages_not_advanced(cfg3):
    s = Session("a", (bot("How are you feeling today?", 0), user("ok", 1), bot("What do you do outside work?", 2)))
    segs = segment_session(s, cfg3)
    # question 2 was skipped; reaching question 3 still counts as moving past question 1
    assert [(g.question_id, g.advanced) for g in segs] == [(1, True), (3, False)]


def test_out_of_order_warns_but_segments(cfg3):
    s = Session(
        "a",
        (bot("Where are you located?", 0), user("x", 1), bot("How are you feeling today?", 2), user("y", 3)),
    )
    warnings = []
    segs = segment_session(s, cfg3, warnings)
    assert {g.question_id for g in segs} == {1, 2}
    assert any("appears after" in w for w in warnings)


def test_no_match_gives_empty_list(cfg3):
    s = Session("a", (bot("Hello!", 0), user("hi", 1)))
    assert segment_session(s, cfg3) == []


def test_end_marker_counts_as_post_interview():
    cfg = InterviewConfig.from_dict({"questions": ["How are you feeling today?"], "end_marker_texts": ["Goodbye!"]})
    s = Session("a", (bot("How are you feeling today?", 0), user("ok", 1), bot("Goodbye!", 2)))
    (g,) = segment_session(s, cfg)
    assert g.advanced and len(g.messages) == 2


texts = st.sampled_from(
    ["How are you feeling today?", "Where are you located?", "What do you do outside work?", "ok", "hmm", "why?"]
)


@given(st.lists(st.tuples(st.sampled_from(list(Role)), texts), max_size=14))
@settings(max_examples=150)
def test_partition_and_monotone_advancement(pairs):
    cfg = InterviewConfig.from_dict(
        {"questions": ["How are you feeling today?", "Where are you located?", "What do you do outside work?"]}
    )
    s = Session("a", tuple(Message(r, t, float(i)) for i, (r, t) in enumerate(pairs)))
    segs = segment_session(s, cfg)
    seen = []
    for g in segs:
        assert g.bot_messages
        assert all(m.question_id == g.question_id for m in g.messages)
        ts = [m.timestamp for m in g.messages]
        assert ts == sorted(ts)
        seen += ts
    assert len(seen) == len(set(seen))
    ids = [g.question_id for g in segs]
    for i, g in enumerate(segs):
        if not g.advanced:
            assert all(j <= g.question_id for j in ids)


# -- ratings --------------------------------------------------------------------


@pytest.mark.parametrize(
    "answer, expected",
    [("4", 4), ("I'd say 5!", 5), ("pretty good", None), ("7", None), ("3 out of 5", 3)],
)
def test_extract_satisfaction(covid_config, answer, expected):
    s = Session(
        "a",
        (
            bot("How are you feeling today?", 0),
            user("fine", 1),
            bot(covid_config.question_text(6), 2),
            user(answer, 3),
        ),
    )
    warnings = []
    sat, trust, feedback = extract_ratings(s, covid_config, warnings)
    assert sat == expected and trust is None and feedback == ()
    assert bool(warnings) == (answer == "7")


def test_session_fields_win(covid_config):
    s = Session("a", (bot(covid_config.question_text(6), 0), user("2", 1)), satisfaction_rating=5, feedback_texts=("nice",))
    assert extract_ratings(s, covid_config) == (5, None, ("nice",))


def test_feedback_collected(covid_config):
    s = Session(
        "a",
        (
            bot(covid_config.question_text(7), 0),
            user("maybe a 3", 1),
            bot(covid_config.question_text(8), 2),
            user("It was okay.", 3),
        ),
    )
    assert extract_ratings(s, covid_config) == (None, 3, ("It was okay.",))


# -- config -----------------------------------------------------------------------


def test_config_round_trip(tmp_path, covid_config):
    p = tmp_path / "q.json"
    p.write_text(json.dumps(covid_config.to_dict()))
    assert load_config(p) == covid_config


@pytest.mark.parametrize(
    "data",
    [
        {"questions": []},
        {"questions": [{"question_id": 2, "canonical_text": "x"}]},
        {"questions": ["  "]},
        {"questions": ["a", "b"], "rating_question_ids": {"satisfaction": 1}},
        {"questions": ["a"], "fuzzy_match_threshold": 0},
        {"questions": ["a"], "thresholds_override": {"hate_speech_rate": 0.5}},
        {"questions": ["a"], "thresholds_override": {"nonsense": 0.5}},
    ],
)
def test_invalid_configs(data):
    with pytest.raises(InputError):
        InterviewConfig.from_dict(data)
