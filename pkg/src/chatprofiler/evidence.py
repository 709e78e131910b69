"""Representative conversation evidence: segment embeddings, k-means with an elbow rule,
and coverage-ranked sampling of one segment per cluster."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .metrics import segment_value
from .resources import EmbeddingTable
from .textutil import tokenize
from .transcript import Segment

MAX_K = 10
N_RESTARTS = 10
MAX_ITER = 100


@dataclass(frozen=True, eq=False)
class SegmentEmbedding:
    session_id: str
    question_id: int
    vector: np.ndarray


@dataclass(frozen=True)
class EvidenceCluster:
    coverage_frac: float
    size: int
    session_id: str
    question_id: int
    transcript: str


@dataclass(frozen=True)
class EvidenceBundle:
    clusters: tuple[EvidenceCluster, ...] = ()
    omitted_segment_refs: tuple[tuple[str, int], ...] = ()
    n_segments: int = 0
    k: int = 0

    @property
    def empty(self) -> bool:
        return not self.clusters


def embed_segment(seg: Segment, emb: EmbeddingTable) -> SegmentEmbedding:
    """Mean word vector over every in-vocabulary token of the segment (both roles)."""
    rows = [emb.index[t] for m in seg.messages for t in tokenize(m.text) if t in emb.index]
    if rows:
        vec = emb.matrix[rows].mean(axis=0)
    else:
        vec = np.zeros(emb.dimension)
    return SegmentEmbedding(seg.session_id, seg.question_id, vec)


def _unit_rows(x: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    return np.divide(x, norms, out=np.zeros_like(x), where=norms > 0)


def _sq_dists(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    return ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)


def _kmeanspp(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(x)
    centers = [x[rng.integers(n)]]
    closest = ((x - centers[0]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = rng.choice(n, p=closest / total)
        else:
            idx = rng.integers(n)
        centers.append(x[idx])
        closest = np.minimum(closest, ((x - x[idx]) ** 2).sum(axis=1))
    return np.array(centers)


def lloyd(x: np.ndarray, centers: np.ndarray, max_iter: int = MAX_ITER) -> tuple[np.ndarray, np.ndarray, float]:
    """Lloyd iterations until assignments stop changing; returns (labels, centers, wcss)."""
    centers = centers.copy()
    labels = None
    for _ in range(max_iter):
        new = _sq_dists(x, centers).argmin(axis=1)
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for j in range(len(centers)):
            members = x[labels == j]
            if len(members):  # empty clusters keep their previous center
                centers[j] = members.mean(axis=0)
    else:
        labels = _sq_dists(x, centers).argmin(axis=1)
    wcss = float(((x - centers[labels]) ** 2).sum())
    return labels, centers, wcss


def kmeans(
    x: np.ndarray,
    k: int,
    rng: np.random.Generator,
    n_init: int = N_RESTARTS,
    warm_start: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Best of ``n_init`` seeded k-means++ runs (plus an optional warm start)."""
    best = None
    starts = [_kmeanspp(x, k, rng) for _ in range(n_init)]
    if warm_start is not None:
        starts.append(warm_start)
    for init in starts:
        result = lloyd(x, init)
        if best is None or result[2] < best[2]:
            best = result
    return best


def wcss_curve(x: np.ndarray, k_max: int, seed: int) -> list[tuple[np.ndarray, float]]:
    """(labels, wcss) for k = 1..k_max.

    Each k > 1 also tries the best (k-1) solution extended by its worst-fit
    point as a start, so the curve never increases with k.
    """
    rng = np.random.default_rng(seed)
    out = []
    prev_centers = None
    for k in range(1, k_max + 1):
        warm = None
        if prev_centers is not None:
            labels, _ = out[-1]
            far = int(((x - prev_centers[labels]) ** 2).sum(axis=1).argmax())
            warm = np.vstack([prev_centers, x[far]])
        labels, centers, wcss = kmeans(x, k, rng, warm_start=warm)
        out.append((labels, wcss))
        prev_centers = centers
    return out


def elbow_k(wcss: Sequence[float], n: int) -> int:
    """k with the largest second difference of the WCSS curve (``wcss[0]`` is k=1)."""
    if n <= 2 or len(wcss) < 3:
        return 1
    scale = max(wcss[0], 1e-300)
    if wcss[0] <= 1e-12:
        return 1
    best_k, best_d = 1, 1e-12 * scale
    for k in range(2, len(wcss)):
        d = wcss[k - 2] - 2 * wcss[k - 1] + wcss[k]
        if d > best_d:
            best_k, best_d = k, d
    return best_k


def _canonical(labels: np.ndarray) -> np.ndarray:
    """Relabel clusters in order of first appearance."""
    mapping: dict[int, int] = {}
    return np.array([mapping.setdefault(int(l), len(mapping)) for l in labels], dtype=int)


def cluster_segments(embeddings: Sequence[SegmentEmbedding], seed: int = 0) -> tuple[np.ndarray, int]:
    """Cluster unit-normalized embeddings; k is picked by the elbow rule over 1..min(10, n)."""
    n = len(embeddings)
    if n == 0:
        raise ValueError("need at least one embedding")
    x = _unit_rows(np.array([e.vector for e in embeddings], dtype=float))
    if n <= 2:
        return np.zeros(n, dtype=int), 1
    curve = wcss_curve(x, min(MAX_K, n), seed)
    k = elbow_k([w for _, w in curve], n)
    return _canonical(curve[k - 1][0]), k


def select_evidence(
    segments: Sequence[Segment],
    assignments: Sequence[int],
    k: int,
    K: int,
    seed: int = 0,
) -> EvidenceBundle:
    """Pick one random segment from each of the K largest clusters."""
    if K < 1:
        raise ValueError("K must be >= 1")
    n = len(segments)
    if n == 0:
        return EvidenceBundle()
    clusters: dict[int, list[Segment]] = {}
    for seg, label in zip(segments, assignments):
        clusters.setdefault(int(label), []).append(seg)
    groups = [sorted(c, key=lambda s: (s.session_id, s.question_id)) for c in clusters.values()]
    groups.sort(key=lambda g: (-len(g), g[0].session_id, g[0].question_id))
    rng = np.random.default_rng(seed)
    shown = []
    chosen = set()
    for members in groups[: min(K, len(groups))]:
        rep = members[int(rng.integers(len(members)))]
        chosen.add((rep.session_id, rep.question_id))
        shown.append(
            EvidenceCluster(
                coverage_frac=len(members) / n,
                size=len(members),
                session_id=rep.session_id,
                question_id=rep.question_id,
                transcript=rep.transcript(),
            )
        )
    omitted = sorted((s.session_id, s.question_id) for s in segments if (s.session_id, s.question_id) not in chosen)
    return EvidenceBundle(tuple(shown), tuple(omitted), n, len(groups))


def extract_for_flag(flag, scored_segments, thresholds, emb: EmbeddingTable, K: int, seed: int = 0) -> EvidenceBundle:
    """Evidence for one flag, drawn from the segments that individually breach its threshold.

    ``scored_segments`` are the flagged question's ``ScoredSegment`` objects.
    """
    th = thresholds[flag.metric]
    breaching = [
        s.segment
        for s in scored_segments
        if s.segment.question_id == flag.question_id
        and th.breached(segment_value(flag.metric, s.segment, s.metrics))
    ]
    if not breaching:
        return EvidenceBundle()
    breaching.sort(key=lambda s: (s.session_id, s.question_id))
    labels, k = cluster_segments([embed_segment(s, emb) for s in breaching], seed)
    return select_evidence(breaching, labels, k, K, seed)
