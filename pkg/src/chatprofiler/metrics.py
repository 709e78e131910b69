"""Question- and interview-level chatbot performance metrics."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .resources import (
    EmpathyLexicon,
    FrequencyTable,
    OffensiveLexicon,
    PiiDetectorSet,
    Resources,
    SentimentLexicon,
)
from .textutil import tokenize
from .transcript import InterviewConfig, Message, Segment


@dataclass(frozen=True)
class MetricVector:
    informativeness: float
    response_length: int
    engagement_duration: float
    empathy_level: float
    repetition_rate: float
    hate_speech_rate: float
    privacy_intrusion_rate: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class SentimentBreakdown:
    positive_frac: float
    neutral_frac: float
    negative_frac: float
    present: bool = True
    n_texts: int = 0


def informativeness(user_text: str, ft: FrequencyTable) -> float:
    """Sum of min-max normalized surprisal over the words of ``user_text``."""
    return math.fsum(ft.normalized_surprisal(w) for w in tokenize(user_text))


def response_length(user_messages: Iterable[Message]) -> int:
    return sum(len(tokenize(m.text)) for m in user_messages)


def engagement_duration(seg: Segment) -> float:
    """Minutes from the first bot message to the last message of the segment."""
    bots = seg.bot_messages
    if len(seg.messages) < 2 or not bots:
        return 0.0
    start = bots[0].timestamp
    end = max(m.timestamp for m in seg.messages)
    return max(0.0, end - start) / 60.0


def completed(seg: Segment) -> bool:
    """A segment counts as completed when the user answered and the chat moved on."""
    return seg.advanced and seg.responded


def completion_rate(
    question_id: int,
    segments_for_question: Sequence[Segment],
    corpus_size: int,
    cfg: InterviewConfig | None = None,
) -> float | None:
    """Completed / responded users for one question; ``None`` when nobody responded.

    The opening question is measured against the whole participant pool. Under
    the default "denominator" convention that is completed / corpus_size; the
    "numerator" convention reads the participant count as the numerator,
    corpus_size / responded, capped at 1.
    """
    if corpus_size < 1:
        raise ValueError("corpus_size must be >= 1")
    responded = sum(1 for s in segments_for_question if s.responded)
    done = sum(1 for s in segments_for_question if completed(s))
    first = cfg.interview_questions[0].question_id if cfg is not None else 1
    if question_id == first:
        convention = cfg.q1_completion_convention if cfg is not None else "denominator"
        if convention == "denominator":
            return done / corpus_size
        if responded == 0:
            return None
        return min(1.0, corpus_size / responded)
    if responded == 0:
        return None
    return done / responded


def empathy_level(seg: Segment, lex: EmpathyLexicon) -> float:
    tokens = [t for m in seg.bot_messages for t in tokenize(m.text)]
    if not tokens:
        return 0.0
    return sum(1 for t in tokens if t in lex.words) / len(tokens)


def repetition_rate(seg: Segment) -> float:
    """Share of bot bi-gram occurrences that repeat an earlier one in the segment."""
    counts: Counter[tuple[str, str]] = Counter()
    for m in seg.bot_messages:
        toks = tokenize(m.text)
        counts.update(zip(toks, toks[1:]))
    total = sum(counts.values())
    if total == 0:
        return 0.0
    repeated = sum(c - 1 for c in counts.values() if c > 1)
    return repeated / total


def contains_offensive(text: str, lex: OffensiveLexicon) -> bool:
    toks = tokenize(text)
    for term in lex.terms:
        n = len(term)
        if n == 1:
            if term[0] in toks:
                return True
            continue
        for i in range(len(toks) - n + 1):
            if tuple(toks[i : i + n]) == term:
                return True
    return False


def hate_speech_rate(seg: Segment, lex: OffensiveLexicon) -> float:
    bots = seg.bot_messages
    if not bots:
        return 0.0
    return sum(1 for m in bots if contains_offensive(m.text, lex)) / len(bots)


def privacy_intrusion_rate(seg: Segment, det: PiiDetectorSet) -> float:
    """Detected sensitive entities per user word."""
    users = seg.user_messages
    total = sum(len(tokenize(m.text)) for m in users)
    if total == 0:
        return 0.0
    found = sum(len(det.find(m.text)) for m in users)
    return min(1.0, found / total)


def sentiment_score(text: str, lex: SentimentLexicon) -> float:
    """Lexicon sentiment of ``text`` normalized to [-1, 1].

    A booster adds its increment (in the direction of the valence) to the
    polar word right after it; a negation among the three preceding words
    flips the sign.
    """
    toks = tokenize(text)
    score = 0.0
    for i, tok in enumerate(toks):
        valence = lex.polarity.get(tok)
        if not valence:
            continue
        if i > 0 and toks[i - 1] in lex.booster_words:
            valence += math.copysign(lex.booster_words[toks[i - 1]], valence)
        if any(t in lex.negation_words for t in toks[max(0, i - 3) : i]):
            valence = -valence
        score += valence
    return score / math.sqrt(score * score + 15.0)


POSITIVE_CUTOFF = 0.05
NEGATIVE_CUTOFF = -0.05


def classify_sentiment(text: str, lex: SentimentLexicon) -> str:
    s = sentiment_score(text, lex)
    if s >= POSITIVE_CUTOFF:
        return "positive"
    if s <= NEGATIVE_CUTOFF:
        return "negative"
    return "neutral"


def sentiment_breakdown(feedback_texts: Sequence[str], lex: SentimentLexicon) -> SentimentBreakdown:
    if not feedback_texts:
        return SentimentBreakdown(0.0, 0.0, 0.0, present=False, n_texts=0)
    counts = Counter(classify_sentiment(t, lex) for t in feedback_texts)
    n = len(feedback_texts)
    pos, neg = counts["positive"] / n, counts["negative"] / n
    # neutral takes the remainder so the fractions sum to one exactly
    return SentimentBreakdown(pos, 1.0 - pos - neg, neg, present=True, n_texts=n)


def score_segment(seg: Segment, res: Resources) -> MetricVector:
    return MetricVector(
        informativeness=informativeness(seg.user_text, res.frequency),
        response_length=response_length(seg.user_messages),
        engagement_duration=engagement_duration(seg),
        empathy_level=empathy_level(seg, res.empathy),
        repetition_rate=repetition_rate(seg),
        hate_speech_rate=hate_speech_rate(seg, res.offensive),
        privacy_intrusion_rate=privacy_intrusion_rate(seg, res.pii),
    )


def segment_value(metric: str, seg: Segment, vec: MetricVector) -> float:
    """Per-segment value of a question-level metric (completion becomes a 0/1 indicator)."""
    if metric == "completion_rate":
        return 1.0 if completed(seg) else 0.0
    return float(getattr(vec, metric))
