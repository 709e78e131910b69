"""Aggregate per-segment metrics into a chatbot profile with Q1-derived thresholds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InputError
from .metricdefs import BELOW, DIRECTIONS, PINNED_THRESHOLDS, QUESTION_METRICS, SEGMENT_METRICS
from .metrics import (
    MetricVector,
    SentimentBreakdown,
    completion_rate,
    score_segment,
    sentiment_breakdown,
)
from .resources import Resources
from .transcript import InterviewConfig, Segment, Session, extract_ratings, segment_session


@dataclass(frozen=True)
class MetricStat:
    mean: float
    sd: float


@dataclass(frozen=True)
class QuestionStats:
    question_id: int
    question_text: str
    n_segments: int
    stats: dict[str, MetricStat]  # empty when n_segments == 0
    completion_rate: float | None

    def value(self, metric: str) -> float | None:
        """The value thresholds are compared against: the mean, or the completion rate."""
        if metric == "completion_rate":
            return self.completion_rate
        stat = self.stats.get(metric)
        return None if stat is None else stat.mean


@dataclass(frozen=True)
class InterviewStats:
    mean_satisfaction: float | None
    mean_trust: float | None
    sentiment: SentimentBreakdown
    interview_completion_rate: float
    n_sessions: int
    n_satisfaction: int = 0
    n_trust: int = 0


@dataclass(frozen=True)
class Threshold:
    value: float
    direction: str  # BELOW or ABOVE

    def breached(self, observed: float) -> bool:
        if self.direction == BELOW:
            return observed < self.value
        return observed > self.value


ThresholdSet = dict[str, Threshold]


@dataclass(frozen=True)
class Flag:
    question_id: int
    metric: str
    observed: float
    threshold: float
    direction: str


@dataclass(frozen=True)
class ScoredSegment:
    segment: Segment
    metrics: MetricVector


@dataclass(frozen=True)
class ChatbotProfile:
    per_question: tuple[QuestionStats, ...]
    interview: InterviewStats
    thresholds: ThresholdSet
    flags: tuple[Flag, ...]
    warnings: tuple[str, ...] = ()
    # scored segments keyed by question id; used for evidence, not serialized
    segments: dict[int, tuple[ScoredSegment, ...]] = field(default_factory=dict, compare=False, repr=False)

    def question(self, question_id: int) -> QuestionStats:
        for q in self.per_question:
            if q.question_id == question_id:
                return q
        raise KeyError(question_id)


def _mean_sd(values: list[float]) -> MetricStat:
    n = len(values)
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / n
    return MetricStat(mean, math.sqrt(var))


def question_stats(
    question_id: int,
    question_text: str,
    scored: list[ScoredSegment],
    corpus_size: int,
    cfg: InterviewConfig,
) -> QuestionStats:
    stats = {}
    if scored:
        for metric in SEGMENT_METRICS:
            stats[metric] = _mean_sd([float(getattr(s.metrics, metric)) for s in scored])
    rate = completion_rate(question_id, [s.segment for s in scored], corpus_size, cfg)
    return QuestionStats(question_id, question_text, len(scored), stats, rate)


def derive_thresholds(q1: QuestionStats | None, cfg: InterviewConfig) -> ThresholdSet:
    """Default thresholds are the opening question's values; overrides replace single entries."""
    overrides = dict(cfg.thresholds_override)
    for name in overrides:
        if name in PINNED_THRESHOLDS:
            raise InputError(f"the {name} threshold is fixed at {PINNED_THRESHOLDS[name]} and cannot be overridden")
        if name not in DIRECTIONS:
            raise InputError(f"unknown metric in thresholds_override: {name!r}")
    thresholds: ThresholdSet = {}
    for metric in QUESTION_METRICS:
        if metric in PINNED_THRESHOLDS:
            value = PINNED_THRESHOLDS[metric]
        elif metric in overrides:
            value = float(overrides[metric])
        else:
            value = q1.value(metric) if q1 is not None and q1.n_segments > 0 else None
            if value is None:
                raise InputError(
                    f"cannot derive the {metric} threshold: the opening question has no data "
                    "and no override was given"
                )
        thresholds[metric] = Threshold(value, DIRECTIONS[metric])
    return thresholds


def find_flags(per_question, thresholds: ThresholdSet) -> list[Flag]:
    flags = []
    for q in per_question:
        for metric in QUESTION_METRICS:
            observed = q.value(metric)
            th = thresholds[metric]
            if observed is not None and th.breached(observed):
                flags.append(Flag(q.question_id, metric, observed, th.value, th.direction))
    return flags


def aggregate(corpus: list[Session], cfg: InterviewConfig, resources: Resources) -> ChatbotProfile:
    """Segment, score and aggregate a corpus into a :class:`ChatbotProfile`."""
    if not corpus:
        raise InputError("the transcript corpus is empty")
    warnings: list[str] = []
    sessions = sorted(corpus, key=lambda s: s.session_id)
    questions = cfg.interview_questions
    last_qid = questions[-1].question_id

    by_question: dict[int, list[ScoredSegment]] = {q.question_id: [] for q in questions}
    satisfaction, trust, feedback = [], [], []
    finished = 0
    for s in sessions:
        segs = segment_session(s, cfg, warnings)
        for seg in segs:
            by_question[seg.question_id].append(ScoredSegment(seg, score_segment(seg, resources)))
        if any(seg.question_id == last_qid and seg.advanced for seg in segs):
            finished += 1
        sat, tru, fb = extract_ratings(s, cfg, warnings)
        if sat is not None:
            satisfaction.append(sat)
        if tru is not None:
            trust.append(tru)
        feedback.extend(fb)

    n = len(sessions)
    per_question = tuple(
        question_stats(q.question_id, q.text, by_question[q.question_id], n, cfg) for q in questions
    )
    thresholds = derive_thresholds(per_question[0], cfg)
    flags = find_flags(per_question, thresholds)

    interview = InterviewStats(
        mean_satisfaction=math.fsum(satisfaction) / len(satisfaction) if satisfaction else None,
        mean_trust=math.fsum(trust) / len(trust) if trust else None,
        sentiment=sentiment_breakdown(feedback, resources.sentiment),
        interview_completion_rate=finished / n,
        n_sessions=n,
        n_satisfaction=len(satisfaction),
        n_trust=len(trust),
    )
    return ChatbotProfile(
        per_question=per_question,
        interview=interview,
        thresholds=thresholds,
        flags=tuple(flags),
        warnings=tuple(warnings),
        segments={qid: tuple(v) for qid, v in by_question.items()},
    )
