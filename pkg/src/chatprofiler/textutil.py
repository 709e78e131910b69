"""Tokenization and fuzzy string matching shared by every module."""
from __future__ import annotations

import re
import unicodedata
from functools import lru_cache

# word characters joined by in-word connectors, so "don't", "123-45-6789"
# and "jo.doe@mail.com" each stay one token
_TOKEN_RE = re.compile(r"[^\W_]+(?:['\-.@_+][^\W_]+)*")
_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'"})
_SENTENCE_RE = re.compile(r"[^.!?\n]+[.!?]*")


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens of ``text``."""
    return _TOKEN_RE.findall(text.translate(_APOSTROPHES).lower())


def normalize(text: str) -> str:
    """Lowercase, drop punctuation, collapse whitespace."""
    chars = []
    for ch in text.lower():
        cat = unicodedata.category(ch)
        if cat.startswith("P") or cat.startswith("S"):
            chars.append(" ")
        else:
            chars.append(ch)
    return " ".join("".join(chars).split())


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        left = i
        for j, cb in enumerate(b, 1):
            diag = prev[j - 1] + (ca != cb)
            up = prev[j] + 1
            left = left + 1
            if up < left:
                left = up
            if diag < left:
                left = diag
            cur.append(left)
        prev = cur
    return prev[-1]


def edit_similarity(a: str, b: str) -> float:
    """1 - levenshtein(a, b) / max(len(a), len(b)); two empty strings are identical."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


@lru_cache(maxsize=1 << 16)
def question_similarity(text: str, question: str, cutoff: float = 0.0) -> float:
    """Similarity of a bot utterance to a canonical question text.

    Both strings are normalized. The score is the best of the plain edit
    similarity and the edit similarity of the word-sorted forms, taken over
    the whole utterance and over each of its sentences (bots often prefix a
    question with an acknowledgement).

    Candidates whose length difference alone rules out reaching ``cutoff``
    are skipped, so the result is exact only when it is >= ``cutoff``.
    """
    target = normalize(question)
    target_sorted = " ".join(sorted(target.split()))
    candidates = dict.fromkeys([normalize(text)] + [normalize(s) for s in _SENTENCE_RE.findall(text)])
    best = 0.0
    for cand in candidates:
        if not cand:
            continue
        longest = max(len(cand), len(target))
        if 1.0 - abs(len(cand) - len(target)) / longest < max(cutoff, best):
            continue
        best = max(
            best,
            edit_similarity(cand, target),
            edit_similarity(" ".join(sorted(cand.split())), target_sorted),
        )
    return best
