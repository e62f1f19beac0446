"""Bytes in, report out."""

from __future__ import annotations

from .cos import open_file
from .doc import Document, build_document
from .report import Stats, ValidationReport
from .rules import Level, applicable_rules, evaluate


def validate_document(doc: Document, level: Level = Level.A1B, strict: bool = False, *,
                      name: str = "", disabled=(), info_side_only: bool = False) -> ValidationReport:
    level = Level(level)
    findings = evaluate(doc, level, strict, disabled=disabled, info_side_only=info_side_only)
    stats = Stats(
        object_count=doc.object_count,
        page_count=len(doc.pages),
        font_count=len(doc.fonts),
        rules_evaluated=len(applicable_rules(level, disabled)),
    )
    return ValidationReport.from_findings(name, level, findings, stats, doc.notes)


def validate_bytes(data: bytes, level: Level = Level.A1B, strict: bool = False, *,
                   name: str = "", disabled=(), info_side_only: bool = False) -> ValidationReport:
    """Open, model and evaluate one file; parse failures raise PdfError."""
    doc = build_document(open_file(data))
    return validate_document(doc, level, strict, name=name, disabled=disabled,
                             info_side_only=info_side_only)
