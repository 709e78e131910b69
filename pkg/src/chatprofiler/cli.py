"""Command-line entry point.

    chatprofiler validate --transcripts t.jsonl --interview q.json
    chatprofiler profile  --transcripts t.jsonl --interview q.json [--out-json p.json]
    chatprofiler suggest  --transcripts t.jsonl --interview q.json [--out-json p.json]
    chatprofiler report   --transcripts t.jsonl --interview q.json --out-html p.html [--out-json p.json]

Exit codes: 0 success, 1 input error, 2 internal failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from .errors import InputError, InvariantError
from .pipeline import build_document
from .report import emit_html, emit_json
from .resources import load_resources, resource_paths
from .suggestions import load_catalog
from .transcript import load_config, load_corpus

log = logging.getLogger("chatprofiler")

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chatprofiler", description="Profile interview chatbots from chat transcripts.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "validate": "check transcripts and interview config, report schema errors",
        "profile": "write the chatbot profile as JSON",
        "suggest": "write profile, design suggestions and evidence as JSON",
        "report": "like suggest, plus a self-contained HTML report",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--transcripts", required=True, type=Path, help="JSONL file, one session per line")
        p.add_argument("--interview", required=True, type=Path, help="interview config JSON")
        if name != "validate":
            p.add_argument("--out-json", type=Path, help="JSON output path (default: stdout)")
            p.add_argument("--seed", type=int, help="override the config's rng_seed")
            res = p.add_argument_group("resources (default: $CHATPROFILER_RESOURCES, then bundled data)")
            res.add_argument("--frequency", type=Path, help="word frequency TSV")
            res.add_argument("--empathy", type=Path, help="empathy lexicon")
            res.add_argument("--sentiment", type=Path, help="sentiment lexicon")
            res.add_argument("--offensive", type=Path, help="offensive terms lexicon")
            res.add_argument("--pii", type=Path, help="PII detector JSON")
            res.add_argument("--embeddings", type=Path, help="word embedding text file")
            res.add_argument("--guidelines", type=Path, help="design guideline catalog JSON")
        if name == "report":
            p.add_argument("--out-html", type=Path, required=True, help="HTML output path")
        p.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def _validate(args) -> int:
    errors: list[InputError] = []
    corpus = load_corpus(args.transcripts, errors)
    for err in errors:
        print(f"{args.transcripts}: {err}", file=sys.stderr)
    try:
        cfg = load_config(args.interview)
    except InputError as exc:
        print(f"{args.interview}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if errors:
        print(f"{len(errors)} invalid line(s)", file=sys.stderr)
        return EXIT_INPUT
    print(
        f"ok: {len(corpus)} sessions, {len(cfg.interview_questions)} interview questions",
        file=sys.stderr,
    )
    return EXIT_OK


def _write(path: Path | None, data: bytes) -> None:
    if path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        path.write_bytes(data)
        log.info("wrote %s", path)


def _run(args) -> int:
    if args.command == "validate":
        return _validate(args)
    corpus = load_corpus(args.transcripts)
    cfg = load_config(args.interview)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, rng_seed=args.seed)
    paths = resource_paths({k: getattr(args, k) for k in
                            ("frequency", "empathy", "sentiment", "offensive", "pii", "embeddings", "guidelines")})
    resources = load_resources(paths)
    catalog = load_catalog(paths["guidelines"])
    doc = build_document(
        corpus,
        cfg,
        resources,
        catalog,
        with_suggestions=args.command != "profile",
        resource_paths=paths,
    )
    for w in doc.warnings:
        log.warning(w)
    json_bytes = emit_json(doc)
    if args.command == "report":
        if args.out_json is not None:
            _write(args.out_json, json_bytes)
        _write(args.out_html, emit_html(doc))
    else:
        _write(args.out_json, json_bytes)
    return EXIT_OK


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    level = logging.ERROR if args.verbose == 0 else logging.WARNING if args.verbose == 1 else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return _run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - any other failure is an internal bug
        log.exception("unexpected failure")
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
