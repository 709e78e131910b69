"""Static language resources: word frequencies, lexicons, PII detectors, embeddings."""
from __future__ import annotations

import json
import logging
import math
import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import InputError
from .textutil import tokenize

log = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"
RESOURCE_ENV = "CHATPROFILER_RESOURCES"

RESOURCE_FILES = {
    "frequency": "frequency.tsv",
    "empathy": "empathy.txt",
    "sentiment": "sentiment.tsv",
    "offensive": "offensive.txt",
    "pii": "pii.json",
    "embeddings": "embeddings.txt",
    "guidelines": "guidelines.json",
}


@dataclass(frozen=True)
class FrequencyTable:
    counts: dict[str, float]
    total: float
    min_surprisal: float
    max_surprisal: float

    @classmethod
    def from_counts(cls, counts: dict[str, float]) -> FrequencyTable:
        if not counts:
            raise ValueError("frequency table is empty")
        if any(not (c > 0 and math.isfinite(c)) for c in counts.values()):
            raise ValueError("counts must be positive and finite")
        total = float(sum(counts.values()))
        lo = -math.log2(max(counts.values()) / total)
        hi = -math.log2(min(counts.values()) / total)
        if hi == lo:
            log.warning("frequency table is degenerate (all counts equal); normalized surprisal is 0")
        return cls(dict(counts), total, lo, hi)

    def surprisal(self, word: str) -> float:
        """-log2 relative frequency; out-of-vocabulary words get the maximum."""
        count = self.counts.get(word)
        if count is None:
            return self.max_surprisal
        return -math.log2(count / self.total)

    def normalized_surprisal(self, word: str) -> float:
        span = self.max_surprisal - self.min_surprisal
        if span <= 0:
            return 0.0
        value = (self.surprisal(word) - self.min_surprisal) / span
        return min(1.0, max(0.0, value))


@dataclass(frozen=True)
class EmpathyLexicon:
    words: frozenset[str]


@dataclass(frozen=True)
class SentimentLexicon:
    polarity: dict[str, float]
    booster_words: dict[str, float] = field(default_factory=dict)
    negation_words: frozenset[str] = frozenset()

    def __post_init__(self):
        overlap = set(self.booster_words) & set(self.negation_words)
        if overlap:
            raise ValueError(f"words are both boosters and negations: {sorted(overlap)}")


@dataclass(frozen=True)
class OffensiveLexicon:
    terms: frozenset[tuple[str, ...]]

    @classmethod
    def from_strings(cls, entries) -> OffensiveLexicon:
        return cls(frozenset(tuple(tokenize(e)) for e in entries if tokenize(e)))


@dataclass(frozen=True)
class PiiDetector:
    name: str
    pattern: re.Pattern
    checksum: str | None = None


def luhn_valid(digits: str) -> bool:
    nums = [int(c) for c in digits if c.isdigit()]
    if len(nums) < 2:
        return False
    total = 0
    for i, d in enumerate(reversed(nums)):
        if i % 2 == 1:
            d *= 2
            if d > 9:
                d -= 9
        total += d
    return total % 10 == 0


@dataclass(frozen=True)
class PiiDetectorSet:
    detectors: tuple[PiiDetector, ...]

    def find(self, text: str) -> list[tuple[str, int, int]]:
        """Non-overlapping (infotype, start, end) entity spans in ``text``.

        Where spans from different detectors overlap, the earlier and then
        longer span wins, so one entity is never counted twice.
        """
        hits = []
        for det in self.detectors:
            for m in det.pattern.finditer(text):
                if m.end() == m.start():
                    continue
                if det.checksum == "luhn" and not luhn_valid(m.group()):
                    continue
                hits.append((m.start(), -(m.end() - m.start()), det.name, m.end()))
        hits.sort()
        spans = []
        last_end = -1
        for start, _, name, end in hits:
            if start >= last_end:
                spans.append((name, start, end))
                last_end = end
        return spans


@dataclass(frozen=True, eq=False)
class EmbeddingTable:
    dimension: int
    index: dict[str, int]
    matrix: np.ndarray

    @property
    def vectors(self) -> dict[str, np.ndarray]:
        return {w: self.matrix[i] for w, i in self.index.items()}

    def get(self, word: str) -> np.ndarray | None:
        i = self.index.get(word)
        return None if i is None else self.matrix[i]

    def __eq__(self, other):
        return (
            isinstance(other, EmbeddingTable)
            and self.dimension == other.dimension
            and self.index == other.index
            and np.array_equal(self.matrix, other.matrix)
        )


# -- loaders --------------------------------------------------------------------


def _read_lines(path) -> list[str]:
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read resource: {exc}", path=str(path)) from exc


def _parse_number(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {text!r}")
    return value


def load_frequency_table(path) -> FrequencyTable:
    counts: dict[str, float] = {}
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            continue
        parts = line.rsplit(None, 1)
        if len(parts) != 2:
            raise InputError(f"expected 'token<TAB>count', got {line!r}", line=lineno, path=str(path))
        token, raw = parts
        try:
            count = _parse_number(raw)
        except ValueError:
            raise InputError(f"invalid count {raw!r}", line=lineno, path=str(path)) from None
        if count <= 0:
            raise InputError(f"count must be positive, got {raw}", line=lineno, path=str(path))
        token = token.strip().lower()
        counts[token] = counts.get(token, 0.0) + count
    if not counts:
        raise InputError("frequency table is empty", path=str(path))
    return FrequencyTable.from_counts(counts)


def load_embeddings(path) -> EmbeddingTable:
    index: dict[str, int] = {}
    rows: list[list[float]] = []
    dim = None
    for lineno, line in enumerate(_read_lines(path), 1):
        parts = line.split()
        if not parts:
            continue
        token, comps = parts[0], parts[1:]
        if dim is None:
            if not comps:
                raise InputError("row has no vector components", line=lineno, path=str(path))
            dim = len(comps)
        elif len(comps) != dim:
            raise InputError(
                f"expected {dim} components, got {len(comps)}", line=lineno, path=str(path)
            )
        try:
            vec = [_parse_number(c) for c in comps]
        except ValueError as exc:
            raise InputError(f"non-numeric component: {exc}", line=lineno, path=str(path)) from None
        if token in index:
            log.warning("%s:%d: duplicate embedding for %r ignored", path, lineno, token)
            continue
        index[token] = len(rows)
        rows.append(vec)
    if dim is None:
        raise InputError("embedding file is empty", path=str(path))
    return EmbeddingTable(dim, index, np.asarray(rows, dtype=float))


def _content_lines(path):
    for lineno, line in enumerate(_read_lines(path), 1):
        stripped = line.strip()
        if stripped:
            yield lineno, stripped


def _load_empathy(path) -> EmpathyLexicon:
    words: list[str] = []
    for lineno, line in _content_lines(path):
        if line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 1:
            raise InputError(f"expected one word per line, got {line!r}", line=lineno, path=str(path))
        words.append(toks[0].lower())
    unique = frozenset(words)
    if len(unique) != len(words):
        log.warning("%s: %d duplicate empathy entries removed", path, len(words) - len(unique))
    if not unique:
        raise InputError("empathy lexicon is empty", path=str(path))
    return EmpathyLexicon(unique)


def _load_sentiment(path) -> SentimentLexicon:
    sections = {"polarity": {}, "boosters": {}, "negations": {}}
    current = "polarity"
    for lineno, line in _content_lines(path):
        if line.startswith("#"):
            header = line[1:].strip().lower()
            if header in sections:
                current = header
            continue
        parts = line.split("\t") if "\t" in line else line.rsplit(None, 1)
        parts = [p.strip() for p in parts]
        table = sections[current]
        if current == "negations":
            if len(parts) != 1:
                raise InputError(f"expected a single negation word, got {line!r}", line=lineno, path=str(path))
            value = 1.0
        else:
            if len(parts) != 2:
                raise InputError(f"expected 'token<TAB>value', got {line!r}", line=lineno, path=str(path))
            try:
                value = _parse_number(parts[1])
            except ValueError:
                raise InputError(f"invalid value {parts[1]!r}", line=lineno, path=str(path)) from None
        word = parts[0].lower()
        if word in table:
            log.warning("%s:%d: duplicate %s entry %r; keeping the first", path, lineno, current, word)
            continue
        table[word] = value
    try:
        return SentimentLexicon(
            polarity=sections["polarity"],
            booster_words=sections["boosters"],
            negation_words=frozenset(sections["negations"]),
        )
    except ValueError as exc:
        raise InputError(str(exc), path=str(path)) from exc


def _load_offensive(path) -> OffensiveLexicon:
    terms: list[tuple[str, ...]] = []
    for lineno, line in _content_lines(path):
        if line.startswith("#"):
            continue
        toks = tuple(tokenize(line))
        if not toks:
            raise InputError(f"entry has no word tokens: {line!r}", line=lineno, path=str(path))
        terms.append(toks)
    unique = frozenset(terms)
    if len(unique) != len(terms):
        log.warning("%s: %d duplicate offensive entries removed", path, len(terms) - len(unique))
    if not unique:
        raise InputError("offensive lexicon is empty", path=str(path))
    return OffensiveLexicon(unique)


def _load_pii(path) -> PiiDetectorSet:
    try:
        entries = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read PII detectors: {exc}", path=str(path)) from exc
    if not isinstance(entries, list):
        raise InputError("PII detector file must hold a JSON list", path=str(path))
    detectors = []
    names = set()
    for i, e in enumerate(entries):
        if not isinstance(e, dict) or not isinstance(e.get("name"), str) or not isinstance(e.get("regex"), str):
            raise InputError(f"detector {i} needs string 'name' and 'regex'", path=str(path))
        if e["name"] in names:
            raise InputError(f"duplicate detector name {e['name']!r}", path=str(path))
        checksum = e.get("checksum")
        if checksum not in (None, "luhn"):
            raise InputError(f"detector {e['name']!r}: unknown checksum {checksum!r}", path=str(path))
        try:
            pattern = re.compile(e["regex"])
        except re.error as exc:
            raise InputError(f"detector {e['name']!r}: pattern does not compile: {exc}", path=str(path)) from exc
        names.add(e["name"])
        detectors.append(PiiDetector(e["name"], pattern, checksum))
    return PiiDetectorSet(tuple(detectors))


_LEXICON_LOADERS = {
    "empathy": _load_empathy,
    "sentiment": _load_sentiment,
    "offensive": _load_offensive,
    "pii": _load_pii,
}


def load_lexicon(path, kind: str):
    """Load one of the lexicon-style resources; ``kind`` is empathy, sentiment, offensive or pii."""
    try:
        loader = _LEXICON_LOADERS[kind]
    except KeyError:
        raise ValueError(f"unknown lexicon kind {kind!r}") from None
    return loader(path)


# -- bundles --------------------------------------------------------------------


@dataclass(frozen=True)
class Resources:
    frequency: FrequencyTable
    empathy: EmpathyLexicon
    sentiment: SentimentLexicon
    offensive: OffensiveLexicon
    pii: PiiDetectorSet
    embeddings: EmbeddingTable


def resource_paths(overrides: dict[str, str | os.PathLike | None] | None = None) -> dict[str, Path]:
    """Resolve resource file paths: explicit overrides, then $CHATPROFILER_RESOURCES, then bundled data."""
    base = Path(os.environ[RESOURCE_ENV]) if os.environ.get(RESOURCE_ENV) else DATA_DIR
    paths = {}
    for key, fname in RESOURCE_FILES.items():
        given = (overrides or {}).get(key)
        if given:
            paths[key] = Path(given)
        elif (base / fname).exists():
            paths[key] = base / fname
        else:
            paths[key] = DATA_DIR / fname
    return paths


def load_resources(paths: dict[str, Path]) -> Resources:
    return Resources(
        frequency=load_frequency_table(paths["frequency"]),
        empathy=load_lexicon(paths["empathy"], "empathy"),
        sentiment=load_lexicon(paths["sentiment"], "sentiment"),
        offensive=load_lexicon(paths["offensive"], "offensive"),
        pii=load_lexicon(paths["pii"], "pii"),
        embeddings=load_embeddings(paths["embeddings"]),
    )


@lru_cache(maxsize=1)
def default_resources() -> Resources:
    """The bundled resources (cached)."""
    return load_resources({k: DATA_DIR / f for k, f in RESOURCE_FILES.items()})
