"""Validation reports: text and JSON rendering, exit codes."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .cos.objects import ObjectId
from .errors import ConfigError, PdfError
from .rules import Level, Violation

REPORT_VERSION = 1

EXIT_CONFORMANT = 0
EXIT_VIOLATIONS = 1
EXIT_UNREADABLE = 2
EXIT_USAGE = 3


class UsageError(Exception):
    """Bad command-line usage; maps to exit code 3."""


@dataclass(frozen=True)
class Stats:
    object_count: int = 0
    page_count: int = 0
    font_count: int = 0
    rules_evaluated: int = 0


@dataclass
class ValidationReport:
    input_name: str
    level: Level
    conformant: bool
    violations: list[Violation] = field(default_factory=list)
    warnings: list[Violation] = field(default_factory=list)
    stats: Stats = field(default_factory=Stats)
    recovery_notes: list[str] = field(default_factory=list)

    @classmethod
    def from_findings(cls, input_name: str, level: Level, findings, stats: Stats, notes=()):
        errors = [v for v in findings if not v.warning]
        warnings = [v for v in findings if v.warning]
        return cls(input_name, Level(level), not errors, errors, warnings, stats, list(notes))

    @property
    def rule_ids(self) -> list[str]:
        return [v.rule_id for v in self.violations]


def _display_name(name: str) -> str:
    return name or "<stdin>"


def render_text(report: ValidationReport) -> str:
    verdict = "CONFORMANT" if report.conformant else "NOT CONFORMANT"
    lines = [f"{verdict} ({report.level.label})  {_display_name(report.input_name)}"]
    for v in report.violations:
        lines.append(f"{v.rule_id}  {v.object_path}  {v.message}")
    if report.warnings:
        lines.append("warnings:")
        for v in report.warnings:
            lines.append(f"{v.rule_id}  {v.object_path}  {v.message}")
    if report.recovery_notes:
        lines.append("recovery notes:")
        lines.extend(f"  {note}" for note in report.recovery_notes)
    s = report.stats
    lines.append(
        f"objects: {s.object_count}  pages: {s.page_count}  fonts: {s.font_count}  "
        f"rules evaluated: {s.rules_evaluated}"
    )
    return "\n".join(lines) + "\n"


def _violation_json(v: Violation) -> dict:
    out = {"ruleId": v.rule_id, "objectPath": v.object_path}
    if v.object_id is not None:
        out["objectNumber"] = v.object_id.num
    out["message"] = v.message
    return out


def report_to_dict(report: ValidationReport, timestamp: str | None = None) -> dict:
    s = report.stats
    out = {
        "reportVersion": REPORT_VERSION,
        "input": _display_name(report.input_name),
        "level": report.level.value,
        "conformant": report.conformant,
        "violations": [_violation_json(v) for v in report.violations],
        "warnings": [_violation_json(v) for v in report.warnings],
        "stats": {
            "objectCount": s.object_count,
            "pageCount": s.page_count,
            "fontCount": s.font_count,
            "rulesEvaluated": s.rules_evaluated,
        },
        "recoveryNotes": list(report.recovery_notes),
    }
    if timestamp is not None:
        out["timestamp"] = timestamp
    return out


def render_json(report: ValidationReport, timestamp: str | None = None) -> bytes:
    """UTF-8 JSON with a fixed key order; byte-stable for equal reports."""
    return (json.dumps(report_to_dict(report, timestamp), ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def _violation_from(d: dict, warning: bool) -> Violation:
    # the JSON contract carries the object number only
    oid = ObjectId(d["objectNumber"], 0) if "objectNumber" in d else None
    return Violation(d["ruleId"], d["objectPath"], oid, d["message"], warning)


def report_from_json(data: bytes | str) -> ValidationReport:
    d = json.loads(data)
    s = d["stats"]
    return ValidationReport(
        input_name="" if d["input"] == "<stdin>" else d["input"],
        level=Level(d["level"]),
        conformant=d["conformant"],
        violations=[_violation_from(v, False) for v in d["violations"]],
        warnings=[_violation_from(v, True) for v in d["warnings"]],
        stats=Stats(s["objectCount"], s["pageCount"], s["fontCount"], s["rulesEvaluated"]),
        recovery_notes=list(d["recoveryNotes"]),
    )


def render_error_text(name: str, error: BaseException) -> str:
    return f"UNREADABLE  {_display_name(name)}  {type(error).__name__}: {error}\n"


def render_error_json(name: str, error: BaseException) -> bytes:
    d = {
        "reportVersion": REPORT_VERSION,
        "input": _display_name(name),
        "error": {"type": type(error).__name__, "message": str(error)},
    }
    return (json.dumps(d, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def exit_code(outcome) -> int:
    if isinstance(outcome, ValidationReport):
        return EXIT_CONFORMANT if outcome.conformant else EXIT_VIOLATIONS
    if isinstance(outcome, (UsageError, ConfigError)):
        return EXIT_USAGE
    if isinstance(outcome, PdfError):
        return EXIT_UNREADABLE
    if isinstance(outcome, int):
        return outcome
    return EXIT_UNREADABLE
