"""Command line: ``pdfa1 validate|convert|inspect``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .cos import open_file
from .dates import parse_pdf_date, parse_xmp_date
from .doc import build_document
from .errors import BadProfile, ConfigError, PdfError, Unfixable
from .icc import find_output_intents
from .report import (
    EXIT_USAGE,
    EXIT_VIOLATIONS,
    UsageError,
    exit_code,
    render_error_json,
    render_error_text,
    render_json,
    render_text,
)
from .rules import Level, load_config, parse_rule_list
from .validate import validate_bytes
from .xmp import extract_xmp

STDIN = "-"


@dataclass
class CliConfig:
    command: str
    inputs: list[str]
    level: Level = Level.A1B
    strict: bool = False
    format: str = "text"
    icc_path: str | None = None
    output_path: str | None = None
    deterministic: datetime | None = None
    disabled_rules: tuple[str, ...] = ()
    jobs: int = 1
    info_side_only: bool = False
    timestamp: str | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _timestamp(text: str) -> datetime:
    dt = parse_xmp_date(text) or parse_pdf_date(text)
    if dt is None:
        raise argparse.ArgumentTypeError(f"not a timestamp: {text!r}")
    return dt if dt.tzinfo else dt.replace(tzinfo=timezone.utc)


def _jobs(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("--jobs must be at least 1")
    return n


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--level", choices=["a1a", "a1b"], default="a1b")
    common.add_argument("--strict", action="store_true", default=None)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--disable", metavar="RULE[,RULE]", action="append", default=[])
    common.add_argument("--config", metavar="PATH")
    common.add_argument("--jobs", type=_jobs, default=1)
    common.add_argument("inputs", nargs="+", metavar="INPUT")

    parser = _Parser(prog="pdfa1", description="PDF/A-1 validation and minimal conversion")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("validate", parents=[common], help="check files against PDF/A-1")
    v.add_argument("--timestamp", metavar="TEXT", help="stamp JSON reports with this text")
    c = sub.add_parser("convert", parents=[common], help="sync metadata, add an output intent, rewrite")
    c.add_argument("--icc", metavar="PATH")
    c.add_argument("--out", metavar="PATH")
    c.add_argument("--deterministic", metavar="TIMESTAMP", type=_timestamp)
    sub.add_parser("inspect", parents=[common], help="print the document census")
    return parser


def parse_args(argv) -> CliConfig:
    ns = _build_parser().parse_args(list(argv))
    strict, disabled, info_side_only = False, (), False
    if ns.config:
        try:
            cfg = load_config(Path(ns.config).read_text(encoding="utf-8"))
        except OSError as e:
            raise UsageError(f"cannot read config {ns.config}: {e.strerror}") from None
        strict, disabled, info_side_only = cfg.strict, cfg.disabled, cfg.info_side_only
    if ns.strict:
        strict = True
    if ns.disable:
        disabled = tuple(sorted(set(disabled) | set(parse_rule_list(",".join(ns.disable)))))
    if ns.command == "convert" and ns.out and len(ns.inputs) > 1:
        raise UsageError("--out takes a single input; omit it to write <name>.pdfa.pdf files")
    return CliConfig(
        command=ns.command,
        inputs=list(ns.inputs),
        level=Level.parse(ns.level),
        strict=strict,
        format=ns.format,
        icc_path=getattr(ns, "icc", None),
        output_path=getattr(ns, "out", None),
        deterministic=getattr(ns, "deterministic", None),
        disabled_rules=tuple(disabled),
        jobs=ns.jobs,
        info_side_only=info_side_only,
        timestamp=getattr(ns, "timestamp", None),
    )


def expand_inputs(inputs) -> list[str]:
    """Directories become their ``*.pdf`` files, sorted; symlinks are skipped."""
    out = []
    for item in inputs:
        if item == STDIN:
            out.append(item)
            continue
        path = Path(item)
        if path.is_dir() and not path.is_symlink():
            found = []
            for root, dirs, files in os.walk(path, followlinks=False):
                dirs[:] = sorted(d for d in dirs if not os.path.islink(os.path.join(root, d)))
                for f in files:
                    full = os.path.join(root, f)
                    if f.lower().endswith(".pdf") and not os.path.islink(full):
                        found.append(full)
            out.extend(sorted(found))
        else:
            out.append(item)
    return out


def _read(name: str, stdin_data: bytes | None) -> bytes:
    if name == STDIN:
        return stdin_data if stdin_data is not None else b""
    return Path(name).read_bytes()


def _validate_one(args) -> tuple[int, bytes]:
    name, data, config = args
    display = "" if name == STDIN else name
    try:
        if isinstance(data, OSError):
            raise data
        report = validate_bytes(data, config.level, config.strict, name=display,
                                disabled=config.disabled_rules, info_side_only=config.info_side_only)
    except PdfError as e:
        body = render_error_json(display, e) if config.format == "json" else render_error_text(display, e).encode()
        return exit_code(e), body
    except OSError as e:
        err = PdfError(f"cannot read: {e.strerror or e}")
        body = render_error_json(display, err) if config.format == "json" else render_error_text(display, err).encode()
        return exit_code(err), body
    if config.format == "json":
        return exit_code(report), render_json(report, config.timestamp)
    return exit_code(report), render_text(report).encode("utf-8")


def _load(names, stdin) -> list:
    stdin_data = stdin.buffer.read() if STDIN in names else None
    items = []
    for name in names:
        try:
            items.append(_read(name, stdin_data))
        except OSError as e:
            items.append(e)
    return items


def run_validate(config: CliConfig, stdout, stdin) -> int:
    names = expand_inputs(config.inputs)
    if not names:
        raise UsageError("no PDF inputs found")
    jobs = [(name, data, config) for name, data in zip(names, _load(names, stdin))]
    if config.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_validate_one, jobs))
    else:
        results = [_validate_one(j) for j in jobs]
    worst = 0
    if config.format == "json" and len(results) > 1:
        # several reports: one JSON array
        docs = [json.loads(body) for _, body in results]
        stdout.buffer.write((json.dumps(docs, ensure_ascii=False, indent=2) + "\n").encode("utf-8"))
        worst = max(code for code, _ in results)
    else:
        for code, body in results:
            stdout.buffer.write(body)
            worst = max(worst, code)
    stdout.flush()
    return worst


def _summary_line(label: str, report) -> str:
    verdict = "conformant" if report.conformant else f"{len(report.violations)} violation(s)"
    ids = ", ".join(dict.fromkeys(report.rule_ids))
    return f"  {label}: {verdict}" + (f" [{ids}]" if ids else "")


def run_convert(config: CliConfig, stdout, stdin, stderr) -> int:
    from .fixup import FixPlan, convert

    names = expand_inputs(config.inputs)
    if not names:
        raise UsageError("no PDF inputs found")
    profile = None
    if config.icc_path:
        try:
            profile = Path(config.icc_path).read_bytes()
        except OSError as e:
            raise UsageError(f"cannot read ICC profile {config.icc_path}: {e.strerror}") from None
    worst = 0
    for name, data in zip(names, _load(names, stdin)):
        display = "<stdin>" if name == STDIN else name
        try:
            if isinstance(data, OSError):
                raise UsageError(f"cannot read {display}: {data.strerror}")
            plan = FixPlan(config.level, profile, config.deterministic)
            out, before, after = convert(data, plan, name="" if name == STDIN else name, strict=config.strict)
        except BadProfile as e:
            if profile is None:
                raise UsageError(f"{display}: {e}; pass --icc PATH") from None
            stderr.write(f"{display}: {e}\n")
            worst = max(worst, EXIT_USAGE)
            continue
        except Unfixable as e:
            stderr.write(f"{display}: unfixable: {e.note}\n")
            worst = max(worst, EXIT_VIOLATIONS)
            continue
        except PdfError as e:
            stderr.write(f"{display}: {type(e).__name__}: {e}\n")
            worst = max(worst, exit_code(e))
            continue
        target = config.output_path
        if target is None:
            target = STDIN if name == STDIN else str(Path(name).with_suffix("")) + ".pdfa.pdf"
        if target == STDIN:
            stdout.buffer.write(out)
            stdout.flush()
            log = stderr
        else:
            Path(target).write_bytes(out)
            log = stdout
        if config.format == "json":
            log.write(json.dumps({
                "input": display, "output": target if target != STDIN else "<stdout>",
                "before": json.loads(render_json(before)), "after": json.loads(render_json(after)),
                "appliedFixes": plan.applied_fixes,
            }, ensure_ascii=False, indent=2) + "\n")
        else:
            log.write(f"{display} -> {target if target != STDIN else '<stdout>'}\n")
            log.write(_summary_line("before", before) + "\n")
            log.write(_summary_line("after ", after) + "\n")
            for fix in plan.applied_fixes:
                log.write(f"  fix: {fix}\n")
        worst = max(worst, exit_code(after))
    return worst


def inspect_bytes(data: bytes, name: str = "") -> dict:
    file = open_file(data)
    doc = build_document(file)
    try:
        xmp = extract_xmp(doc)
        metadata = "present" if xmp is not None else "absent"
    except PdfError as e:
        metadata = f"unreadable ({e})"
    return {
        "input": name or "<stdin>",
        "version": f"{file.version[0]}.{file.version[1]}",
        "revisions": file.revisions,
        "objects": doc.object_count,
        "encrypted": file.has_encrypt,
        "pages": len(doc.pages),
        "fonts": [
            {"location": f.location, "subtype": f.subtype, "embedded": bool(
                f.descriptor and any(k in f.descriptor for k in ("FontFile", "FontFile2", "FontFile3")))}
            for f in doc.fonts
        ],
        "features": [{"kind": f.kind.value, "location": f.location} for f in doc.features],
        "filters": sorted({name for name, _ in doc.filter_census}),
        "deviceColors": sorted({space for space, _ in doc.device_colors}),
        "outputIntents": [
            {"subtype": e.subtype, "condition": e.condition_id,
             "colorSpace": e.header.color_space.decode("latin-1").strip() if e.header else None,
             "anomalies": e.anomalies}
            for e in find_output_intents(doc)
        ],
        "metadata": metadata,
        "notes": doc.notes,
    }


def run_inspect(config: CliConfig, stdout, stdin) -> int:
    names = expand_inputs(config.inputs)
    worst = 0
    for name, data in zip(names, _load(names, stdin)):
        display = "" if name == STDIN else name
        try:
            if isinstance(data, OSError):
                raise PdfError(f"cannot read: {data.strerror}")
            census = inspect_bytes(data, display)
        except PdfError as e:
            body = render_error_json(display, e) if config.format == "json" else render_error_text(display, e).encode()
            stdout.buffer.write(body)
            worst = max(worst, exit_code(e))
            continue
        if config.format == "json":
            stdout.buffer.write((json.dumps(census, ensure_ascii=False, indent=2) + "\n").encode("utf-8"))
        else:
            lines = [f"{census['input']}: PDF {census['version']}, {census['revisions']} revision(s), "
                     f"{census['objects']} objects, {census['pages']} page(s)"]
            for f in census["fonts"]:
                lines.append(f"  font {f['location']}: {f['subtype']}, "
                             f"{'embedded' if f['embedded'] else 'not embedded'}")
            for f in census["features"]:
                lines.append(f"  feature {f['kind']} at {f['location']}")
            lines.append(f"  filters: {', '.join(census['filters']) or 'none'}")
            lines.append(f"  device colour: {', '.join(census['deviceColors']) or 'none'}")
            for oi in census["outputIntents"]:
                lines.append(f"  output intent {oi['subtype']} ({oi['condition']}) "
                             f"profile {oi['colorSpace'] or '-'}"
                             + (f" anomalies: {'; '.join(oi['anomalies'])}" if oi["anomalies"] else ""))
            lines.append(f"  metadata: {census['metadata']}")
            if census["encrypted"]:
                lines.append("  encrypted")
            for note in census["notes"]:
                lines.append(f"  note: {note}")
            stdout.buffer.write(("\n".join(lines) + "\n").encode("utf-8"))
    stdout.flush()
    return worst


def run(config: CliConfig, stdout=None, stdin=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stdin = stdin or sys.stdin
    stderr = stderr or sys.stderr
    if config.command == "validate":
        return run_validate(config, stdout, stdin)
    if config.command == "convert":
        return run_convert(config, stdout, stdin, stderr)
    return run_inspect(config, stdout, stdin)


def main(argv=None, stdout=None, stdin=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
        return run(config, stdout, stdin, stderr)
    except (UsageError, ConfigError) as e:
        stderr.write(f"pdfa1: usage error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
