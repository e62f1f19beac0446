"""PDF/A-1 conformance validation and minimal remediation."""

from .doc import Document, build_document
from .errors import PdfError
from .fixup import FixPlan, convert
from .report import ValidationReport, render_json, render_text
from .rules import CATALOG, Level, Violation, evaluate
from .validate import validate_bytes, validate_document

__all__ = [
    "CATALOG",
    "Document",
    "FixPlan",
    "Level",
    "PdfError",
    "ValidationReport",
    "Violation",
    "build_document",
    "convert",
    "evaluate",
    "render_json",
    "render_text",
    "validate_bytes",
    "validate_document",
]
