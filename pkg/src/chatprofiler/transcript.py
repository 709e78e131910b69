"""Transcript data model, JSONL wire format and per-question segmentation."""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Mapping

from .errors import InputError
from .metricdefs import DIRECTIONS, PINNED_THRESHOLDS
from .textutil import normalize, question_similarity


class Role(str, Enum):
    BOT = "bot"
    USER = "user"


@dataclass(frozen=True)
class Message:
    role: Role
    text: str
    timestamp: float
    question_id: int | None = None

    def __post_init__(self):
        if not isinstance(self.role, Role):
            object.__setattr__(self, "role", Role(self.role))
        if not math.isfinite(self.timestamp) or self.timestamp < 0:
            raise ValueError(f"timestamp must be finite and non-negative, got {self.timestamp}")
        if self.question_id is not None and self.question_id < 1:
            raise ValueError(f"question_id must be >= 1, got {self.question_id}")


@dataclass(frozen=True)
class Session:
    session_id: str
    messages: tuple[Message, ...]
    satisfaction_rating: int | None = None
    trust_rating: int | None = None
    feedback_texts: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "messages", tuple(self.messages))
        object.__setattr__(self, "feedback_texts", tuple(self.feedback_texts))
        for a, b in zip(self.messages, self.messages[1:]):
            if b.timestamp < a.timestamp:
                raise ValueError(f"session {self.session_id}: messages out of timestamp order")
        for name in ("satisfaction_rating", "trust_rating"):
            value = getattr(self, name)
            if value is not None and not 1 <= value <= 5:
                raise ValueError(f"{name} must lie in [1, 5], got {value}")


@dataclass(frozen=True)
class Segment:
    """The slice of one session belonging to one interview question."""

    session_id: str
    question_id: int
    messages: tuple[Message, ...]
    advanced: bool

    @property
    def bot_messages(self) -> tuple[Message, ...]:
        return tuple(m for m in self.messages if m.role is Role.BOT)

    @property
    def user_messages(self) -> tuple[Message, ...]:
        return tuple(m for m in self.messages if m.role is Role.USER)

    @property
    def user_text(self) -> str:
        return "\n".join(m.text for m in self.user_messages)

    @property
    def responded(self) -> bool:
        return any(m.role is Role.USER for m in self.messages)

    def transcript(self, bot_label: str = "Bot", user_label: str = "User") -> str:
        return "\n".join(
            f"{bot_label if m.role is Role.BOT else user_label}: {m.text}" for m in self.messages
        )


@dataclass(frozen=True)
class Question:
    question_id: int
    text: str


@dataclass(frozen=True)
class RatingQuestions:
    """Which trailing configured questions collect ratings and rationale."""

    satisfaction: int | None = None
    trust: int | None = None
    feedback: tuple[int, ...] = ()

    @property
    def ids(self) -> set[int]:
        ids = set(self.feedback)
        ids.update(q for q in (self.satisfaction, self.trust) if q is not None)
        return ids


Q1_CONVENTIONS = ("denominator", "numerator")


@dataclass(frozen=True)
class InterviewConfig:
    questions: tuple[Question, ...]
    rating_question_ids: RatingQuestions = field(default_factory=RatingQuestions)
    fuzzy_match_threshold: float = 0.8
    thresholds_override: Mapping[str, float] = field(default_factory=dict)
    max_evidence_per_suggestion: int = 2
    rng_seed: int = 0
    q1_completion_convention: str = "denominator"
    end_marker_texts: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "questions", tuple(self.questions))
        object.__setattr__(self, "end_marker_texts", tuple(self.end_marker_texts))
        object.__setattr__(self, "thresholds_override", dict(self.thresholds_override))
        if not self.questions:
            raise ValueError("at least one question is required")
        ids = [q.question_id for q in self.questions]
        if ids != list(range(1, len(ids) + 1)):
            raise ValueError(f"question ids must be 1..n in order, got {ids}")
        for q in self.questions:
            if not normalize(q.text):
                raise ValueError(f"question {q.question_id} has empty text")
        rating = self.rating_question_ids.ids
        if not rating <= set(ids):
            raise ValueError(f"rating question ids {sorted(rating - set(ids))} are not configured")
        interview = [i for i in ids if i not in rating]
        if not interview:
            raise ValueError("all questions are rating questions")
        if rating and min(rating) < max(interview):
            raise ValueError("rating questions must come after every interview question")
        if not 0 < self.fuzzy_match_threshold <= 1:
            raise ValueError("fuzzy_match_threshold must lie in (0, 1]")
        if self.max_evidence_per_suggestion < 1:
            raise ValueError("max_evidence_per_suggestion must be positive")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be non-negative")
        if self.q1_completion_convention not in Q1_CONVENTIONS:
            raise ValueError(f"q1_completion_convention must be one of {Q1_CONVENTIONS}")
        for name, value in self.thresholds_override.items():
            if name not in DIRECTIONS:
                raise ValueError(f"unknown metric in thresholds_override: {name!r}")
            if name in PINNED_THRESHOLDS:
                raise ValueError(f"the {name} threshold is fixed and cannot be overridden")
            if not math.isfinite(value):
                raise ValueError(f"threshold for {name} must be finite")

    @property
    def interview_questions(self) -> tuple[Question, ...]:
        rating = self.rating_question_ids.ids
        return tuple(q for q in self.questions if q.question_id not in rating)

    def question_text(self, question_id: int) -> str:
        return self.questions[question_id - 1].text

    @classmethod
    def from_dict(cls, data: Mapping) -> InterviewConfig:
        try:
            questions = []
            for i, q in enumerate(data["questions"], 1):
                if isinstance(q, str):
                    questions.append(Question(i, q))
                else:
                    questions.append(Question(int(q["question_id"]), str(q["canonical_text"])))
            rq = data.get("rating_question_ids") or {}
            rating = RatingQuestions(
                satisfaction=rq.get("satisfaction"),
                trust=rq.get("trust"),
                feedback=tuple(rq.get("feedback", ())),
            )
            kwargs = {
                k: data[k]
                for k in (
                    "fuzzy_match_threshold",
                    "max_evidence_per_suggestion",
                    "rng_seed",
                    "q1_completion_convention",
                )
                if k in data
            }
            return cls(
                questions=tuple(questions),
                rating_question_ids=rating,
                thresholds_override={k: float(v) for k, v in (data.get("thresholds_override") or {}).items()},
                end_marker_texts=tuple(data.get("end_marker_texts", ())),
                **kwargs,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"invalid interview config: {exc}") from exc

    def to_dict(self) -> dict:
        rq = self.rating_question_ids
        return {
            "questions": [{"question_id": q.question_id, "canonical_text": q.text} for q in self.questions],
            "rating_question_ids": {
                "satisfaction": rq.satisfaction,
                "trust": rq.trust,
                "feedback": list(rq.feedback),
            },
            "fuzzy_match_threshold": self.fuzzy_match_threshold,
            "thresholds_override": dict(sorted(self.thresholds_override.items())),
            "max_evidence_per_suggestion": self.max_evidence_per_suggestion,
            "rng_seed": self.rng_seed,
            "q1_completion_convention": self.q1_completion_convention,
            "end_marker_texts": list(self.end_marker_texts),
        }


def load_config(path: str | Path) -> InterviewConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read interview config: {exc}", path=str(path)) from exc
    if not isinstance(data, dict):
        raise InputError("interview config must be a JSON object", path=str(path))
    return InterviewConfig.from_dict(data)


# -- wire format --------------------------------------------------------------


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _session_from_obj(obj, lineno: int) -> Session:
    if not isinstance(obj, dict):
        raise InputError("session must be a JSON object", line=lineno)
    sid = obj.get("session_id")
    if not isinstance(sid, str):
        raise InputError("missing or non-string session_id", line=lineno)
    raw_messages = obj.get("messages")
    if not isinstance(raw_messages, list):
        raise InputError("missing messages list", line=lineno)
    messages = []
    for i, m in enumerate(raw_messages):
        if not isinstance(m, dict):
            raise InputError(f"message {i} is not an object", line=lineno)
        role = m.get("role")
        if role not in ("bot", "user"):
            raise InputError(f"message {i} has invalid role {role!r}", line=lineno)
        text = m.get("text")
        if not isinstance(text, str):
            raise InputError(f"message {i} is missing text", line=lineno)
        ts = m.get("timestamp")
        if not _is_number(ts) or not math.isfinite(ts) or ts < 0:
            raise InputError(f"message {i} is missing a valid timestamp", line=lineno)
        qid = m.get("question_id")
        if qid is not None and (not _is_int(qid) or qid < 1):
            raise InputError(f"message {i} has invalid question_id {qid!r}", line=lineno)
        messages.append(Message(Role(role), text, float(ts), qid))
    messages.sort(key=lambda m: m.timestamp)

    ratings = {}
    for name in ("satisfaction_rating", "trust_rating"):
        value = obj.get(name)
        if value is not None and (not _is_int(value) or not 1 <= value <= 5):
            raise InputError(f"{name} must be an integer in [1, 5], got {value!r}", line=lineno)
        ratings[name] = value
    feedback = obj.get("feedback_texts") or []
    if not isinstance(feedback, list) or not all(isinstance(t, str) for t in feedback):
        raise InputError("feedback_texts must be a list of strings", line=lineno)
    return Session(sid, tuple(messages), feedback_texts=tuple(feedback), **ratings)


def parse_corpus(
    stream: IO[bytes] | IO[str] | Iterable[bytes | str] | bytes | str,
    errors: list[InputError] | None = None,
) -> list[Session]:
    """Parse JSONL sessions, one per line.

    The first malformed line raises :class:`InputError`; pass an ``errors``
    list to collect every error and skip the offending lines instead.
    """
    if isinstance(stream, (bytes, str)):
        stream = stream.splitlines()
    sessions: list[Session] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(stream, 1):
        try:
            if isinstance(raw, bytes):
                try:
                    raw = raw.decode("utf-8")
                except UnicodeDecodeError as exc:
                    raise InputError(f"invalid UTF-8: {exc}", line=lineno) from exc
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed JSON: {exc.msg}", line=lineno) from exc
            session = _session_from_obj(obj, lineno)
            if session.session_id in seen:
                raise InputError(f"duplicate session_id {session.session_id!r}", line=lineno)
            seen.add(session.session_id)
            sessions.append(session)
        except InputError as exc:
            if errors is None:
                raise
            errors.append(exc)
    return sessions


def load_corpus(path: str | Path, errors: list[InputError] | None = None) -> list[Session]:
    try:
        with open(path, "rb") as fh:
            return parse_corpus(fh, errors)
    except OSError as exc:
        raise InputError(f"cannot read transcripts: {exc}", path=str(path)) from exc


def session_to_obj(s: Session) -> dict:
    messages = []
    for m in s.messages:
        d = {"role": m.role.value, "text": m.text, "timestamp": m.timestamp}
        if m.question_id is not None:
            d["question_id"] = m.question_id
        messages.append(d)
    obj = {"session_id": s.session_id, "messages": messages, "feedback_texts": list(s.feedback_texts)}
    if s.satisfaction_rating is not None:
        obj["satisfaction_rating"] = s.satisfaction_rating
    if s.trust_rating is not None:
        obj["trust_rating"] = s.trust_rating
    return obj


def serialize_corpus(sessions: Iterable[Session]) -> str:
    return "".join(json.dumps(session_to_obj(s), ensure_ascii=False) + "\n" for s in sessions)


# -- segmentation ---------------------------------------------------------------

_END = -1  # pseudo question id for messages after an end marker


def _match_question(text: str, cfg: InterviewConfig) -> int | None:
    best_id, best = None, 0.0
    for q in cfg.questions:
        score = question_similarity(text, q.text, cfg.fuzzy_match_threshold)
        if score >= cfg.fuzzy_match_threshold and score > best:
            best_id, best = q.question_id, score
    if cfg.end_marker_texts:
        for marker in cfg.end_marker_texts:
            score = question_similarity(text, marker, cfg.fuzzy_match_threshold)
            if score >= cfg.fuzzy_match_threshold and score > best:
                best_id, best = _END, score
    return best_id


def _assign(s: Session, cfg: InterviewConfig, warnings: list[str] | None) -> tuple[dict[int, list[Message]], bool]:
    """Group messages by question id; also report whether post-interview messages exist."""
    warn = warnings.append if warnings is not None else (lambda _msg: None)
    n = len(cfg.questions)
    interview_ids = {q.question_id for q in cfg.interview_questions}
    groups: dict[int, list[Message]] = {}
    post = False

    if any(m.question_id is not None for m in s.messages):
        last_labeled = max(i for i, m in enumerate(s.messages) if m.question_id is not None)
        highest = 0
        for i, m in enumerate(s.messages):
            qid = m.question_id
            if qid is None:
                if i > last_labeled:
                    post = True
                continue
            if qid > n:
                warn(f"session {s.session_id}: question_id {qid} is not configured; message ignored")
                continue
            if qid not in groups and qid < highest:
                warn(f"session {s.session_id}: question {qid} appears after question {highest}")
            highest = max(highest, qid)
            groups.setdefault(qid, []).append(m)
    else:
        current: int | None = None
        for m in s.messages:
            if m.role is Role.BOT:
                qid = _match_question(m.text, cfg)
                if qid is not None and qid != current:
                    if qid == _END:
                        pass
                    elif qid in groups:
                        warn(f"session {s.session_id}: question {qid} asked again after question {current}")
                    elif current is not None and current != _END and qid < current:
                        warn(f"session {s.session_id}: question {qid} appears after question {current}")
                    current = qid
            if current == _END:
                post = True
            elif current is not None:
                groups.setdefault(current, []).append(replace(m, question_id=current))

    if any(qid not in interview_ids for qid in groups):
        post = True
    return groups, post


def segment_session(s: Session, cfg: InterviewConfig, warnings: list[str] | None = None) -> list[Segment]:
    """Split a session into one segment per interview question it reached."""
    groups, post = _assign(s, cfg, warnings)
    present = []
    for q in cfg.interview_questions:
        msgs = groups.get(q.question_id)
        if not msgs:
            continue
        if not any(m.role is Role.BOT for m in msgs):
            if warnings is not None:
                warnings.append(
                    f"session {s.session_id}: question {q.question_id} has no bot message; segment dropped"
                )
            continue
        present.append((q.question_id, msgs))
    segments = []
    for idx, (qid, msgs) in enumerate(present):
        advanced = idx + 1 < len(present) or post
        segments.append(Segment(s.session_id, qid, tuple(msgs), advanced))
    return segments


_INT_RE = re.compile(r"(?<![\w.])-?\d+(?:\.\d+)?(?![\w])")


def _parse_rating(texts: list[str], what: str, sid: str, warnings: list[str] | None) -> int | None:
    for text in texts:
        match = _INT_RE.search(text)
        if match is None:
            continue
        token = match.group()
        value = float(token)
        if value.is_integer() and 1 <= value <= 5:
            return int(value)
        if warnings is not None:
            warnings.append(f"session {sid}: {what} answer {token!r} is outside 1..5; ignored")
        return None
    return None


def extract_ratings(
    s: Session, cfg: InterviewConfig, warnings: list[str] | None = None
) -> tuple[int | None, int | None, tuple[str, ...]]:
    """Satisfaction rating, trust rating and free-text rationale for a session.

    Values already carried by the session win; missing ones are parsed from
    the user answers to the configured rating questions.
    """
    rq = cfg.rating_question_ids
    satisfaction, trust, feedback = s.satisfaction_rating, s.trust_rating, s.feedback_texts
    if (satisfaction is None and rq.satisfaction) or (trust is None and rq.trust) or (not feedback and rq.feedback):
        groups, _ = _assign(s, cfg, None)

        def answers(qid):
            return [m.text for m in groups.get(qid, ()) if m.role is Role.USER]

        if satisfaction is None and rq.satisfaction:
            satisfaction = _parse_rating(answers(rq.satisfaction), "satisfaction", s.session_id, warnings)
        if trust is None and rq.trust:
            trust = _parse_rating(answers(rq.trust), "trust", s.session_id, warnings)
        if not feedback and rq.feedback:
            feedback = tuple(t for qid in rq.feedback for t in answers(qid) if t.strip())
    return satisfaction, trust, tuple(feedback)
