"""Rule catalog and evaluation engine."""

from __future__ import annotations

import configparser
import enum
import re
from dataclasses import dataclass

from .cos.filters import decode_stream
from .cos.objects import Name, ObjectId, PdfString, Stream
from .dates import parse_pdf_date
from .doc import Document, FeatureKind, extract_info
from .errors import ConfigError, MetadataNotAStream, NoRdfRoot, PdfError, XmlMalformed
from .icc import PDFA_INTENT, find_output_intents
from .textenc import UndecodableText, decode_text
from .xmp import DATE_KEYS, PAIRS, XmpPacket, correspondence, extract_xmp, parse_xmp

MAX_VERSION = (1, 4)


class Level(str, enum.Enum):
    A1A = "A1a"
    A1B = "A1b"

    @property
    def label(self) -> str:
        return f"PDF/A-1{self.value[-1]}"

    @classmethod
    def parse(cls, text: str) -> "Level":
        for level in cls:
            if level.value.lower() == str(text).lower():
                return level
        raise ValueError(f"unknown conformance level {text!r}")

    def __str__(self):
        return self.value


class Severity(str, enum.Enum):
    MANDATORY = "Mandatory"
    PROHIBITED = "Prohibited"
    RESTRICTED = "Restricted"
    RECOMMENDED = "Recommended"


BOTH = frozenset({Level.A1A, Level.A1B})
LEVEL_A = frozenset({Level.A1A})


@dataclass(frozen=True)
class Rule:
    id: str
    title: str
    severity: Severity
    levels: frozenset
    artifact_added: bool = False


def _r(rule_id, title, severity=Severity.MANDATORY, levels=BOTH, added=False):
    return Rule(rule_id, title, severity, levels, added)


P = Severity.PROHIBITED
CATALOG: tuple[Rule, ...] = (
    _r("VER-1", "file version must not exceed PDF 1.4"),
    _r("SELF-1", "stream data must not live in an external file", P),
    _r("SELF-2", "embedded file attachments are not allowed", P),
    _r("SELF-3", "Launch actions are not allowed", P),
    _r("SELF-4", "remote go-to actions are not allowed", P),
    _r("SELF-5", "URI actions reference external resources (strict mode)", P, added=True),
    _r("AV-1", "Sound annotations are not allowed", P),
    _r("AV-2", "Movie annotations are not allowed", P),
    _r("AV-3", "Screen annotations are not allowed", P),
    _r("AV-4", "Sound actions are not allowed", P),
    _r("AV-5", "Movie actions are not allowed", P),
    _r("DYN-1", "JavaScript is not allowed", P, added=True),
    _r("FNT-1", "every font needs a font descriptor"),
    _r("FNT-2", "every font must embed exactly one font program"),
    _r("FNT-3", "embedded font programs must be non-empty and well-formed"),
    _r("META-1", "the catalog must carry an XMP metadata stream"),
    _r("META-2", "the XMP metadata must be well-formed"),
    _r("META-3", "XMP must correspond with the document information dictionary"),
    _r("META-4", "XMP must identify the PDF/A part and conformance level"),
    _r("DATE-1", "info dates must follow the PDF date syntax"),
    _r("FIL-1", "JPXDecode compression is not allowed", P),
    _r("FIL-2", "LZWDecode compression is restricted", Severity.RESTRICTED, added=True),
    _r("ENC-1", "encryption is not allowed", P, added=True),
    _r("CLR-1", "device colour requires a PDF/A output intent with an embedded profile"),
    _r("CLR-2", "output intent profiles must be present and valid"),
    _r("TAG-1", "the document must be marked as tagged", levels=LEVEL_A),
    _r("TAG-2", "the document must have a structure tree", levels=LEVEL_A),
)
RULES = {r.id: r for r in CATALOG}
RULE_ORDER = {r.id: i for i, r in enumerate(CATALOG)}
DISABLEABLE = frozenset(r.id for r in CATALOG if r.artifact_added)

# Internal failures are reported under this id; it sits outside the catalog.
ENGINE = Rule("ENGINE", "internal evaluation failure", Severity.MANDATORY, BOTH)


@dataclass(frozen=True)
class Violation:
    rule_id: str
    object_path: str
    object_id: ObjectId | None
    message: str
    warning: bool = False


def _v(rule_id, path, message, oid=None) -> Violation:
    return Violation(rule_id, path, oid, message)


def sort_key(v: Violation):
    return (RULE_ORDER.get(v.rule_id, len(CATALOG)), v.object_path)


# -- individual checks ----------------------------------------------------

def _version_text(value) -> tuple[int, int] | None:
    if isinstance(value, Name):
        m = re.fullmatch(r"(\d{1,2})\.(\d{1,2})", str(value))
        if m:
            return int(m.group(1)), int(m.group(2))
    return None


def check_version(doc: Document) -> list[Violation]:
    out = []
    header = tuple(doc.file.version)
    if header > MAX_VERSION:
        out.append(_v("VER-1", "header", f"header declares PDF {header[0]}.{header[1]}"))
    catalog_version = _version_text(doc.resolve(doc.catalog.get("Version")))
    if catalog_version and catalog_version > MAX_VERSION:
        out.append(_v("VER-1", "catalog → Version",
                      f"catalog declares PDF {catalog_version[0]}.{catalog_version[1]}"))
    return out


SELF_RULES = {
    FeatureKind.EXTERNAL_STREAM_DATA: ("SELF-1", "stream data refers to an external file"),
    FeatureKind.EMBEDDED_FILE_ATTACHMENT: ("SELF-2", "embedded file attachment"),
    FeatureKind.LAUNCH_ACTION: ("SELF-3", "Launch action"),
    FeatureKind.REMOTE_GOTO_ACTION: ("SELF-4", "remote go-to action"),
}
AV_RULES = {
    FeatureKind.SOUND_ANNOT: ("AV-1", "Sound annotation"),
    FeatureKind.MOVIE_ANNOT: ("AV-2", "Movie annotation"),
    FeatureKind.SCREEN_ANNOT: ("AV-3", "Screen annotation"),
    FeatureKind.SOUND_ACTION: ("AV-4", "Sound action"),
    FeatureKind.MOVIE_ACTION: ("AV-5", "Movie action"),
    FeatureKind.JAVASCRIPT_ACTION: ("DYN-1", "JavaScript"),
}


def _feature_rules(doc: Document, table: dict) -> list[Violation]:
    return [
        _v(table[f.kind][0], f.location, table[f.kind][1], f.object_id)
        for f in doc.features if f.kind in table
    ]


def check_self_containment(doc: Document, strict: bool = False) -> list[Violation]:
    table = dict(SELF_RULES)
    if strict:
        table[FeatureKind.NON_CONTENT_EXTERNAL_REF] = ("SELF-5", "URI action references an external resource")
    return _feature_rules(doc, table)


def check_audio_video(doc: Document) -> list[Violation]:
    return _feature_rules(doc, AV_RULES)


_FONT_FILES = ("FontFile", "FontFile2", "FontFile3")


def _font_program_problem(key: str, data: bytes) -> str | None:
    if not data:
        return "font program is empty"
    if key == "FontFile" and not data.startswith(b"%!"):
        return "Type 1 font program does not start with %!"
    if key == "FontFile2" and data[:4] not in (b"\x00\x01\x00\x00", b"true"):
        return "TrueType font program lacks an sfnt version tag"
    return None


def check_fonts(doc: Document) -> list[Violation]:
    out = []
    for use in doc.fonts:
        if use.subtype == "Type3":
            continue
        path, oid = use.location, use.font_id
        if use.subtype == "Type0" and use.descendant is None:
            out.append(_v("FNT-1", path, "composite font has no descendant font", oid))
            continue
        if use.descriptor is None:
            out.append(_v("FNT-1", path, f"font /{use.subtype or '?'} has no font descriptor", oid))
            continue
        present = [k for k in _FONT_FILES if k in use.descriptor]
        if len(present) != 1:
            what = "no embedded font program" if not present else "several font program entries"
            out.append(_v("FNT-2", path, what, oid))
            continue
        program = doc.resolve(use.descriptor[present[0]])
        if not isinstance(program, Stream):
            out.append(_v("FNT-3", path, f"{present[0]} is not a stream", oid))
            continue
        try:
            data = decode_stream(program, doc.resolve)
        except PdfError as e:
            out.append(_v("FNT-3", path, f"{present[0]} cannot be decoded: {e}", oid))
            continue
        problem = _font_program_problem(present[0], data)
        if problem:
            out.append(_v("FNT-3", path, problem, oid))
    return out


def check_metadata(doc: Document, packet: XmpPacket | None, mismatches,
                   level: Level = Level.A1B, error: str | None = None) -> list[Violation]:
    """META-1 when no packet and no ``error``; ``error`` explains META-2."""
    out = []
    if error is not None:
        return [_v("META-2", "catalog → Metadata", error)]
    if packet is None:
        return [_v("META-1", "catalog", "no XMP metadata stream")]
    for m in mismatches:
        out.append(_v("META-3", f"Info → {m.key}",
                      f"{m.key}: info {m.info_value!r} vs XMP {m.xmp_value!r} ({m.note})"))
    keys = {k for k, *_ in PAIRS} - DATE_KEYS
    for key, type_name in doc.info_anomalies:
        if key in keys:
            out.append(_v("META-3", f"Info → {key}", f"{key} is a {type_name}, not a text string"))
    if packet.pdfa_id is None:
        out.append(_v("META-4", "catalog → Metadata", "no pdfaid identification"))
    else:
        part, conformance = packet.pdfa_id
        accepted = ("A",) if level is Level.A1A else ("A", "B")
        if part != 1 or conformance not in accepted:
            out.append(_v("META-4", "catalog → Metadata",
                          f"pdfaid declares part {part} conformance {conformance}, evaluating {level.label}"))
    return out


def check_dates(doc: Document) -> list[Violation]:
    out = []
    for key in ("CreationDate", "ModDate"):
        if not doc.info or key not in doc.info:
            continue
        value = doc.resolve(doc.info[key])
        if not isinstance(value, PdfString):
            out.append(_v("DATE-1", f"Info → {key}", f"{key} is not a string"))
            continue
        try:
            text = decode_text(bytes(value))
        except UndecodableText:
            out.append(_v("DATE-1", f"Info → {key}", f"{key} is not decodable text"))
            continue
        if parse_pdf_date(text) is None:
            out.append(_v("DATE-1", f"Info → {key}", f"{text!r} is not a PDF date"))
    return out


def check_filters(doc: Document) -> list[Violation]:
    out = []
    seen = set()
    for name, location in doc.filter_census:
        if (name, location) in seen:
            continue
        seen.add((name, location))
        if name == "JPXDecode":
            out.append(_v("FIL-1", location, "JPXDecode is newer than PDF 1.4"))
        elif name == "LZWDecode":
            out.append(_v("FIL-2", location, "LZWDecode compression"))
    return out


def check_encryption(doc: Document) -> list[Violation]:
    if doc.file.has_encrypt:
        return [_v("ENC-1", "trailer → Encrypt", "file is encrypted")]
    return []


def check_output_intent(doc: Document, intents, strict: bool = False) -> list[Violation]:
    out = []
    pdfa = [e for e in intents if e.subtype == PDFA_INTENT]
    for e in pdfa:
        for anomaly in e.anomalies:
            out.append(_v("CLR-2", e.location, anomaly, e.object_id))
    required = strict or bool(doc.device_colors)
    if required and not any(e.header is not None and not e.anomalies for e in pdfa):
        if doc.device_colors:
            space, where = doc.device_colors[0]
            why = f"{space} used at {where}"
        else:
            why = "strict mode"
        out.append(_v("CLR-1", "catalog → OutputIntents",
                      f"no {PDFA_INTENT} output intent with a valid embedded profile ({why})"))
    return out


def check_tagged(doc: Document) -> list[Violation]:
    out = []
    mark = doc.resolve(doc.catalog.get("MarkInfo"))
    marked = doc.resolve(mark.get("Marked")) if isinstance(mark, dict) else None
    if marked is not True:
        out.append(_v("TAG-1", "catalog → MarkInfo", "document is not marked as tagged"))
    if not isinstance(doc.resolve(doc.catalog.get("StructTreeRoot")), dict):
        out.append(_v("TAG-2", "catalog → StructTreeRoot", "no structure tree root"))
    return out


# -- engine ---------------------------------------------------------------

def load_metadata(doc: Document, info_side_only: bool = False):
    """(packet, mismatches, error) for the catalog's metadata."""
    try:
        raw = extract_xmp(doc)
    except MetadataNotAStream as e:
        return None, [], str(e)
    except PdfError as e:
        return None, [], f"metadata stream undecodable: {e}"
    if raw is None:
        return None, [], None
    try:
        packet = parse_xmp(raw)
    except (XmlMalformed, NoRdfRoot) as e:
        return None, [], str(e)
    return packet, correspondence(packet, extract_info(doc), info_side_only), None


def applicable_rules(level: Level, disabled=()) -> list[Rule]:
    return [r for r in CATALOG if level in r.levels and r.id not in disabled]


def evaluate(doc: Document, level: Level = Level.A1B, strict: bool = False, *,
             disabled=(), info_side_only: bool = False,
             raise_internal: bool = False) -> list[Violation]:
    """Run every applicable rule; the result is sorted by catalog order,
    then object path.

    Restricted rules report warnings unless ``strict``. An unexpected
    exception inside a check becomes an ENGINE violation, or propagates
    when ``raise_internal`` is set.
    """
    level = Level(level)
    bad = set(disabled) - DISABLEABLE
    if bad:
        raise ConfigError(f"rules cannot be disabled: {', '.join(sorted(bad))}")

    def metadata():
        packet, mismatches, error = load_metadata(doc, info_side_only)
        return check_metadata(doc, packet, mismatches, level, error)

    checks = [
        ("version", lambda: check_version(doc)),
        ("self-containment", lambda: check_self_containment(doc, strict)),
        ("audio/video", lambda: check_audio_video(doc)),
        ("fonts", lambda: check_fonts(doc)),
        ("metadata", metadata),
        ("dates", lambda: check_dates(doc)),
        ("filters", lambda: check_filters(doc)),
        ("encryption", lambda: check_encryption(doc)),
        ("output intent", lambda: check_output_intent(doc, find_output_intents(doc), strict)),
    ]
    if level is Level.A1A:
        checks.append(("tagging", lambda: check_tagged(doc)))

    allowed = {r.id for r in applicable_rules(level, disabled)}
    found: list[Violation] = []
    for name, check in checks:
        try:
            results = check()
        except Exception as e:
            if raise_internal:
                raise
            found.append(_v("ENGINE", name, f"{type(e).__name__}: {e}"))
            continue
        for v in results:
            if v.rule_id not in allowed:
                continue
            severity = RULES[v.rule_id].severity
            if severity is Severity.RECOMMENDED or (severity is Severity.RESTRICTED and not strict):
                v = Violation(v.rule_id, v.object_path, v.object_id, v.message, warning=True)
            found.append(v)
    found.sort(key=sort_key)
    return found


# -- configuration --------------------------------------------------------

@dataclass
class Config:
    strict: bool = False
    disabled: tuple[str, ...] = ()
    info_side_only: bool = False


def parse_rule_list(text: str) -> tuple[str, ...]:
    ids = tuple(sorted({part.strip().upper() for part in text.split(",") if part.strip()}))
    unknown = [i for i in ids if i not in RULES]
    if unknown:
        raise ConfigError(f"unknown rule id: {', '.join(unknown)}")
    fixed = [i for i in ids if i not in DISABLEABLE]
    if fixed:
        raise ConfigError(f"only {', '.join(sorted(DISABLEABLE))} may be disabled, not {', '.join(fixed)}")
    return ids


def load_config(text: str) -> Config:
    """Parse an INI-style configuration::

        [pdfa1]
        strict = yes
        disable = ENC-1, DYN-1
        info_side_only = no
    """
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigError(f"bad configuration: {e}") from None
    if not parser.has_section("pdfa1"):
        raise ConfigError("configuration has no [pdfa1] section")
    section = parser["pdfa1"]
    unknown = set(section) - {"strict", "disable", "info_side_only"}
    if unknown:
        raise ConfigError(f"unknown configuration key: {', '.join(sorted(unknown))}")
    try:
        return Config(
            strict=section.getboolean("strict", False),
            disabled=parse_rule_list(section.get("disable", "")),
            info_side_only=section.getboolean("info_side_only", False),
        )
    except ValueError as e:
        raise ConfigError(f"bad configuration value: {e}") from None
