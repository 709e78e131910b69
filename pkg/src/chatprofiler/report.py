"""Canonical JSON and self-contained HTML rendering of a chatbot profile."""
from __future__ import annotations

import hashlib
import html
import json
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import InvariantError
from .evidence import EvidenceBundle
from .metricdefs import DISPLAY_NAMES, QUESTION_METRICS, SEGMENT_METRICS, fmt
from .profile import ChatbotProfile
from .suggestions import Suggestion
from .transcript import InterviewConfig, Session

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class ReportDocument:
    generated_at: str
    config: dict
    profile: ChatbotProfile
    suggestions: tuple[Suggestion, ...] | None = None
    warnings: tuple[str, ...] = ()
    schema_version: str = SCHEMA_VERSION
    title: str = "Interview chatbot profile"
    extra: dict = field(default_factory=dict)


def generated_at(corpus: list[Session]) -> str:
    """Report timestamp: $SOURCE_DATE_EPOCH if set, else the latest transcript message.

    Deriving it from the data keeps repeated runs byte-identical.
    """
    env = os.environ.get("SOURCE_DATE_EPOCH")
    if env:
        ts = float(env)
    else:
        ts = max((m.timestamp for s in corpus for m in s.messages), default=0.0)
    return datetime.fromtimestamp(ts, tz=timezone.utc).isoformat()


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def config_echo(cfg: InterviewConfig, resource_paths: dict | None = None) -> dict:
    echo = {"interview": cfg.to_dict()}
    if resource_paths:
        echo["resources"] = {
            key: {"file": Path(p).name, "sha256": file_digest(p)} for key, p in sorted(resource_paths.items())
        }
    return echo


# -- dict conversion --------------------------------------------------------------


def evidence_to_dict(b: EvidenceBundle) -> dict:
    return {
        "k": b.k,
        "n_segments": b.n_segments,
        "clusters": [
            {
                "coverage_frac": c.coverage_frac,
                "size": c.size,
                "session_id": c.session_id,
                "question_id": c.question_id,
                "transcript": c.transcript,
            }
            for c in b.clusters
        ],
        "omitted_segment_refs": [{"session_id": s, "question_id": q} for s, q in b.omitted_segment_refs],
    }


def suggestion_to_dict(s: Suggestion) -> dict:
    return {
        "question_id": s.question_id,
        "question_text": s.question_text,
        "metric": s.metric,
        "direction_word": s.direction_word,
        "guideline_id": s.guideline_id,
        "guideline_text": s.guideline_text,
        "sentence": s.sentence,
        "observed": s.observed,
        "threshold": s.threshold,
        "evidence": evidence_to_dict(s.evidence),
    }


def profile_to_dict(p: ChatbotProfile) -> dict:
    sent = p.interview.sentiment
    return {
        "per_question": [
            {
                "question_id": q.question_id,
                "question_text": q.question_text,
                "n_segments": q.n_segments,
                "completion_rate": q.completion_rate,
                "metrics": {m: {"mean": st.mean, "sd": st.sd} for m, st in q.stats.items()},
            }
            for q in p.per_question
        ],
        "interview": {
            "mean_satisfaction": p.interview.mean_satisfaction,
            "mean_trust": p.interview.mean_trust,
            "n_satisfaction": p.interview.n_satisfaction,
            "n_trust": p.interview.n_trust,
            "interview_completion_rate": p.interview.interview_completion_rate,
            "n_sessions": p.interview.n_sessions,
            "sentiment": {
                "present": sent.present,
                "n_texts": sent.n_texts,
                "positive_frac": sent.positive_frac,
                "neutral_frac": sent.neutral_frac,
                "negative_frac": sent.negative_frac,
            },
        },
        "thresholds": {m: {"value": t.value, "direction": t.direction} for m, t in p.thresholds.items()},
        "flags": [
            {
                "question_id": f.question_id,
                "metric": f.metric,
                "observed": f.observed,
                "threshold": f.threshold,
                "direction": f.direction,
            }
            for f in p.flags
        ],
    }


def document_to_dict(doc: ReportDocument) -> dict:
    d = {
        "schema_version": doc.schema_version,
        "generated_at": doc.generated_at,
        "config": doc.config,
        "profile": profile_to_dict(doc.profile),
        "warnings": list(doc.warnings),
    }
    if doc.suggestions is not None:
        d["suggestions"] = [suggestion_to_dict(s) for s in doc.suggestions]
    d.update(doc.extra)
    return d


def emit_json(doc: ReportDocument) -> bytes:
    """Canonical JSON: sorted keys, shortest round-trip floats, no NaN/inf."""
    try:
        text = json.dumps(document_to_dict(doc), sort_keys=True, ensure_ascii=False, allow_nan=False, indent=2)
    except ValueError as exc:
        raise InvariantError(f"report contains a non-finite number: {exc}") from exc
    return (text + "\n").encode("utf-8")


# -- HTML -------------------------------------------------------------------------


def esc(text: str) -> str:
    # "://" is broken up so user text never reads as a link target
    return html.escape(str(text), quote=False).replace("://", ":&#47;&#47;")


def pct(frac: float, decimals: int = 0) -> str:
    return f"{frac * 100:.{decimals}f}%"


_COLORS = {"positive": "#2e9e5b", "neutral": "#9aa5b1", "negative": "#d64545"}


def _pie_svg(slices: list[tuple[str, float]], size: int = 180) -> str:
    r = size / 2 - 4
    cx = cy = size / 2
    parts = [f'<svg class="pie" width="{size}" height="{size}" viewBox="0 0 {size} {size}" role="img">']
    angle = -math.pi / 2
    for name, frac in slices:
        if frac <= 0:
            continue
        color = _COLORS.get(name, "#888")
        if frac >= 1 - 1e-12:
            parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r:.2f}" fill="{color}"/>')
            break
        end = angle + 2 * math.pi * frac
        x0, y0 = cx + r * math.cos(angle), cy + r * math.sin(angle)
        x1, y1 = cx + r * math.cos(end), cy + r * math.sin(end)
        large = 1 if frac > 0.5 else 0
        parts.append(
            f'<path d="M{cx:.2f},{cy:.2f} L{x0:.2f},{y0:.2f} A{r:.2f},{r:.2f} 0 {large} 1 {x1:.2f},{y1:.2f} Z" '
            f'fill="{color}"><title>{esc(name)} {pct(frac)}</title></path>'
        )
        angle = end
    parts.append("</svg>")
    return "".join(parts)


def _bar_svg(metric: str, rows: list[tuple[int, float | None, bool]], threshold: float) -> str:
    width, height, pad_l, pad_b, pad_t = 380, 190, 36, 24, 18
    inner_w, inner_h = width - pad_l - 8, height - pad_b - pad_t
    values = [v for _, v, _ in rows if v is not None]
    top = max(values + [threshold, 0.0])
    top = top * 1.15 if top > 0 else 1.0
    n = max(1, len(rows))
    slot = inner_w / n
    bar_w = slot * 0.6

    def y(v):
        return pad_t + inner_h - inner_h * (v / top)

    parts = [
        f'<svg class="bars" width="{width}" height="{height}" viewBox="0 0 {width} {height}" role="img">',
        f'<line x1="{pad_l}" y1="{pad_t + inner_h}" x2="{width - 8}" y2="{pad_t + inner_h}" stroke="#555"/>',
    ]
    for i, (qid, value, flagged) in enumerate(rows):
        x = pad_l + slot * i + (slot - bar_w) / 2
        label_x = x + bar_w / 2
        if value is not None:
            yv = y(value)
            cls = "bar flagged" if flagged else "bar"
            parts.append(
                f'<rect class="{cls}" x="{x:.2f}" y="{yv:.2f}" width="{bar_w:.2f}" '
                f'height="{pad_t + inner_h - yv:.2f}"/>'
            )
            parts.append(
                f'<text x="{label_x:.2f}" y="{yv - 3:.2f}" text-anchor="middle" class="val">{fmt(metric, value)}</text>'
            )
        else:
            parts.append(
                f'<text x="{label_x:.2f}" y="{pad_t + inner_h - 3:.2f}" text-anchor="middle" class="val">n/a</text>'
            )
        parts.append(
            f'<text x="{label_x:.2f}" y="{height - 6}" text-anchor="middle" class="axis">Q{qid}</text>'
        )
    yt = y(threshold)
    parts.append(
        f'<line class="threshold" x1="{pad_l}" y1="{yt:.2f}" x2="{width - 8}" y2="{yt:.2f}"/>'
        f'<text x="{pad_l - 4}" y="{yt + 4:.2f}" text-anchor="end" class="axis">{fmt(metric, threshold)}</text>'
    )
    parts.append("</svg>")
    return "".join(parts)


_CSS = """
body { font-family: -apple-system, "Segoe UI", Helvetica, Arial, sans-serif; color: #1f2933; margin: 0; background: #f5f7fa; }
main { max-width: 1180px; margin: 0 auto; padding: 1.5rem; }
section { background: #fff; border: 1px solid #dde3ea; border-radius: 8px; padding: 1rem 1.25rem; margin-bottom: 1rem; }
h1 { margin: 0 0 .3rem; } h2 { margin-top: 0; font-size: 1.2rem; } h3 { font-size: 1.05rem; margin: 1rem 0 .4rem; }
.muted { color: #616e7c; font-size: .9rem; }
.cards { display: flex; flex-wrap: wrap; gap: .8rem; align-items: center; }
.card { border: 1px solid #dde3ea; border-radius: 6px; padding: .6rem .9rem; min-width: 150px; }
.card .label { font-size: .75rem; text-transform: uppercase; color: #616e7c; }
.card .value { font-size: 1.4rem; font-weight: 600; }
.charts { display: grid; grid-template-columns: repeat(auto-fill, minmax(390px, 1fr)); gap: .8rem; }
.chart h4 { margin: .2rem 0; font-size: .95rem; }
.bar { fill: #4c78a8; } .bar.flagged { fill: #d64545; }
.threshold { stroke: #e8a33d; stroke-width: 2; stroke-dasharray: 6 4; }
.val, .axis { font-size: 10px; fill: #3e4c59; }
table { border-collapse: collapse; width: 100%; font-size: .88rem; }
th, td { border-bottom: 1px solid #e4e7eb; padding: .35rem .5rem; text-align: right; }
th:first-child, td:first-child { text-align: left; }
td.flagged { background: #fde8e8; color: #a61b1b; font-weight: 600; }
.flag { border-left: 4px solid #d64545; padding: .3rem .8rem; margin: .6rem 0; background: #fffafa; }
.flag ul { margin: .3rem 0; }
details { margin: .3rem 0; }
pre.transcript { white-space: pre-wrap; background: #f5f7fa; padding: .5rem; border-radius: 4px; font-size: .85rem; }
.legend span { display: inline-block; margin-right: .8rem; }
.swatch { display: inline-block; width: .8rem; height: .8rem; margin-right: .25rem; vertical-align: middle; }
"""


def _sentiment_html(sent: dict) -> str:
    if not sent["present"]:
        return '<p class="muted">No feedback text was collected.</p>'
    slices = [(k, sent[f"{k}_frac"]) for k in ("positive", "neutral", "negative")]
    legend = "".join(
        f'<span><i class="swatch" style="background:{_COLORS[k]}"></i>{k.capitalize()} {pct(v)}</span>'
        for k, v in slices
    )
    return f'{_pie_svg(slices)}<div class="legend">{legend}</div><p class="muted">{sent["n_texts"]} feedback responses</p>'


def _card(label: str, value: str) -> str:
    return f'<div class="card"><div class="label">{esc(label)}</div><div class="value">{esc(value)}</div></div>'


def emit_html(doc: ReportDocument) -> bytes:
    """A single self-contained HTML page (inline CSS and SVG, no external resources)."""
    d = document_to_dict(doc)
    prof = d["profile"]
    inter = prof["interview"]
    flags = prof["flags"]
    flagged = {(f["question_id"], f["metric"]) for f in flags}
    qs = prof["per_question"]

    def qvalue(q, metric):
        if metric == "completion_rate":
            return q["completion_rate"]
        st = q["metrics"].get(metric)
        return None if st is None else st["mean"]

    out = [
        "<!DOCTYPE html>",
        '<html lang="en"><head><meta charset="utf-8">',
        f"<title>{esc(doc.title)}</title><style>{_CSS}</style></head><body><main>",
        f'<section><h1>{esc(doc.title)}</h1><p class="muted">{inter["n_sessions"]} transcripts, '
        f"{len(qs)} interview questions, generated {esc(d['generated_at'])}</p></section>",
    ]

    # interview level
    sat, tru = inter["mean_satisfaction"], inter["mean_trust"]
    out.append('<section id="interview"><h2>Interview level</h2><div class="cards">')
    out.append(_card("Satisfaction (1-5)", f"{sat:.2f}" if sat is not None else "n/a"))
    out.append(_card("Trust (1-5)", f"{tru:.2f}" if tru is not None else "n/a"))
    out.append(_card("Interview completion", f"{inter['interview_completion_rate']:.2f}"))
    out.append(_card("Sessions", str(inter["n_sessions"])))
    out.append(f'<div class="card"><div class="label">User sentiment</div>{_sentiment_html(inter["sentiment"])}</div>')
    out.append("</div></section>")

    # per-metric charts
    out.append('<section id="metrics"><h2>Question-level metrics</h2>')
    out.append('<p class="muted">Dashed line: threshold that triggers design suggestions. Red bars breach it.</p>')
    out.append('<div class="charts">')
    for metric in QUESTION_METRICS:
        th = prof["thresholds"][metric]
        rows = [(q["question_id"], qvalue(q, metric), (q["question_id"], metric) in flagged) for q in qs]
        out.append(
            f'<div class="chart" id="chart-{metric}"><h4>{esc(DISPLAY_NAMES[metric])} '
            f'<span class="muted">(flag when {th["direction"]} {fmt(metric, th["value"])})</span></h4>'
            f"{_bar_svg(metric, rows, th['value'])}</div>"
        )
    out.append("</div>")

    # table
    out.append("<table><thead><tr><th>Question</th><th>n</th>")
    out.extend(f"<th>{esc(DISPLAY_NAMES[m])}</th>" for m in QUESTION_METRICS)
    out.append("</tr></thead><tbody>")
    for q in qs:
        out.append(f"<tr><td>Q{q['question_id']}. {esc(q['question_text'])}</td><td>{q['n_segments']}</td>")
        for metric in QUESTION_METRICS:
            v = qvalue(q, metric)
            cls = ' class="flagged"' if (q["question_id"], metric) in flagged else ""
            if v is None:
                cell = "n/a"
            elif metric in SEGMENT_METRICS:
                cell = f"{fmt(metric, v)} &plusmn; {fmt(metric, q['metrics'][metric]['sd'])}"
            else:
                cell = fmt(metric, v)
            out.append(f"<td{cls}>{cell}</td>")
        out.append("</tr>")
    out.append("</tbody></table></section>")

    # suggestions
    out.append('<section id="suggestions"><h2>Design suggestions</h2>')
    suggestions = d.get("suggestions")
    if not flags:
        out.append('<p class="notice">No design suggestions triggered.</p>')
    else:
        by_flag: dict[tuple[int, str], list[dict]] = {}
        for s in suggestions or []:
            by_flag.setdefault((s["question_id"], s["metric"]), []).append(s)
        for q in qs:
            qflags = [f for f in flags if f["question_id"] == q["question_id"]]
            if not qflags:
                continue
            out.append(f"<h3>Q{q['question_id']}. {esc(q['question_text'])}</h3>")
            for f in qflags:
                metric = f["metric"]
                word = "too low" if f["direction"] == "below" else "too high"
                out.append(
                    f'<div class="flag" data-flag="q{f["question_id"]}:{metric}">'
                    f"<strong>{esc(DISPLAY_NAMES[metric])}</strong> is {word}: "
                    f"{fmt(metric, f['observed'])} vs threshold {fmt(metric, f['threshold'])}"
                )
                items = by_flag.get((f["question_id"], metric), [])
                if items:
                    out.append("<ul>")
                    out.extend(f'<li class="sentence">{esc(s["sentence"])}</li>' for s in items)
                    out.append("</ul>")
                    ev = items[0]["evidence"]
                    if ev["clusters"]:
                        for i, c in enumerate(ev["clusters"], 1):
                            out.append(
                                f"<details><summary>Evidence {i}: cluster covering {pct(c['coverage_frac'], 1)} "
                                f"of {ev['n_segments']} breaching segments (session {esc(c['session_id'])})</summary>"
                                f'<pre class="transcript">{esc(c["transcript"])}</pre></details>'
                            )
                        if ev["omitted_segment_refs"]:
                            refs = ", ".join(esc(r["session_id"]) for r in ev["omitted_segment_refs"])
                            out.append(
                                f"<details><summary>{len(ev['omitted_segment_refs'])} more breaching segments"
                                f'</summary><p class="muted">{refs}</p></details>'
                            )
                    else:
                        out.append('<p class="muted">No individual segment breaches the threshold.</p>')
                out.append("</div>")
    out.append("</section>")

    if d["warnings"]:
        out.append('<section id="warnings"><h2>Warnings</h2><details><summary>')
        out.append(f"{len(d['warnings'])} warnings</summary><ul>")
        out.extend(f"<li>{esc(w)}</li>" for w in d["warnings"])
        out.append("</ul></details></section>")
    out.append("</main></body></html>\n")
    return "\n".join(out).encode("utf-8")
