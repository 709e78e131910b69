"""End-to-end wiring: transcripts -> profile -> suggestions -> report document."""
from __future__ import annotations

from .profile import aggregate
from .report import ReportDocument, config_echo, generated_at
from .resources import Resources
from .suggestions import GuidelineCatalog, generate_suggestions
from .transcript import InterviewConfig, Session


def build_document(
    corpus: list[Session],
    cfg: InterviewConfig,
    resources: Resources,
    catalog: GuidelineCatalog | None = None,
    *,
    with_suggestions: bool = True,
    resource_paths: dict | None = None,
) -> ReportDocument:
    profile = aggregate(corpus, cfg, resources)
    suggestions = None
    if with_suggestions:
        if catalog is None:
            raise ValueError("a guideline catalog is needed for suggestions")
        suggestions = tuple(generate_suggestions(profile, catalog, cfg, resources))
    return ReportDocument(
        generated_at=generated_at(corpus),
        config=config_echo(cfg, resource_paths),
        profile=profile,
        suggestions=suggestions,
        warnings=profile.warnings,
    )
