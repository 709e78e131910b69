"""Map profile flags to design guidelines and realize them as suggestion sentences."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InputError, InvariantError
from .evidence import EvidenceBundle, extract_for_flag
from .metricdefs import BELOW, DISPLAY_NAMES, QUESTION_METRICS, metric_key
from .profile import ChatbotProfile, Flag
from .resources import Resources
from .transcript import InterviewConfig

TOO_LOW = "too low"
TOO_HIGH = "too high"
DIRECTION_WORDS = (TOO_LOW, TOO_HIGH)


@dataclass(frozen=True)
class Guideline:
    guideline_id: str
    text: str
    metrics: frozenset[str]


@dataclass(frozen=True)
class GuidelineCatalog:
    entries: tuple[Guideline, ...]

    def __post_init__(self):
        ids = [g.guideline_id for g in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate guideline ids")

    def for_metric(self, metric: str) -> list[Guideline]:
        return [g for g in self.entries if metric in g.metrics]

    def check_coverage(self) -> None:
        missing = [m for m in QUESTION_METRICS if not self.for_metric(m)]
        if missing:
            raise ValueError(f"no guideline covers metrics {missing}")

    @classmethod
    def from_list(cls, items) -> GuidelineCatalog:
        entries = []
        for item in items:
            metrics = frozenset(metric_key(m) for m in item["metrics"])
            entries.append(Guideline(str(item["id"]), str(item["text"]), metrics))
        return cls(tuple(entries))


def load_catalog(path) -> GuidelineCatalog:
    try:
        items = json.loads(Path(path).read_text(encoding="utf-8"))
        catalog = GuidelineCatalog.from_list(items)
        catalog.check_coverage()
    except (OSError, UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid guideline catalog: {exc}", path=str(path)) from exc
    return catalog


@dataclass(frozen=True)
class Suggestion:
    question_id: int
    question_text: str
    metric: str
    direction_word: str
    guideline_id: str
    guideline_text: str
    sentence: str
    observed: float
    threshold: float
    evidence: EvidenceBundle = field(default_factory=EvidenceBundle)


def _metric_phrase(metric: str) -> str:
    label = DISPLAY_NAMES.get(metric, metric)
    return " ".join(label.replace("_", " ").lower().split())


def realize_sentence(question: str, guideline: str, metric: str, z: str) -> str:
    """Render "For question 'Q', d because metric m is Z."

    The guideline's leading verb is lowercased, the metric is spelled out in
    lowercase and the sentence ends with exactly one period.
    """
    if z not in DIRECTION_WORDS:
        raise ValueError(f"Z must be one of {DIRECTION_WORDS}, got {z!r}")
    q = question.strip()
    d = guideline.strip().rstrip(". ")
    if not q or not d or not metric.strip():
        raise ValueError("question, guideline and metric must be non-empty")
    d = d[0].lower() + d[1:]
    return f"For question '{q}', {d} because metric {_metric_phrase(metric)} is {z}."


_SENTENCE_RE = re.compile(
    r"^For question '(?P<q>.*)', (?P<d>.*) because metric (?P<m>.+) is (?P<z>too low|too high)\.$", re.S
)


def parse_sentence(sentence: str) -> tuple[str, str, str, str]:
    """Inverse of :func:`realize_sentence`: (question, guideline, metric phrase, Z)."""
    m = _SENTENCE_RE.match(sentence)
    if m is None:
        raise ValueError(f"not a suggestion sentence: {sentence!r}")
    return m.group("q"), m.group("d"), m.group("m"), m.group("z")


def direction_word(flag: Flag) -> str:
    return TOO_LOW if flag.direction == BELOW else TOO_HIGH


def generate_suggestions(
    profile: ChatbotProfile,
    catalog: GuidelineCatalog,
    cfg: InterviewConfig,
    resources: Resources | None = None,
) -> list[Suggestion]:
    """One suggestion per (flag, applicable guideline).

    Evidence is attached when ``resources`` (for the embedding table) is given.
    """
    out = []
    for flag in profile.flags:
        guidelines = catalog.for_metric(flag.metric)
        if not guidelines:
            raise InvariantError(f"no guideline in the catalog covers {flag.metric}")
        evidence = EvidenceBundle()
        if resources is not None:
            evidence = extract_for_flag(
                flag,
                profile.segments.get(flag.question_id, ()),
                profile.thresholds,
                resources.embeddings,
                cfg.max_evidence_per_suggestion,
                cfg.rng_seed,
            )
        qtext = cfg.question_text(flag.question_id)
        z = direction_word(flag)
        for g in guidelines:
            out.append(
                Suggestion(
                    question_id=flag.question_id,
                    question_text=qtext,
                    metric=flag.metric,
                    direction_word=z,
                    guideline_id=g.guideline_id,
                    guideline_text=g.text,
                    sentence=realize_sentence(qtext, g.text, flag.metric, z),
                    observed=flag.observed,
                    threshold=flag.threshold,
                    evidence=evidence,
                )
            )
    out.sort(key=lambda s: (s.question_id, s.metric, s.guideline_id))
    return out
