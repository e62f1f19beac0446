"""Minimal remediation: regenerate XMP from the info dictionary, install
an ICC output intent, and rewrite the file.

Nothing else is touched. Missing fonts, prohibited annotations and the
like stay as they are and are still reported after conversion.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from xml.sax.saxutils import escape, quoteattr

from .cos import open_file
from .cos.filters import flate_encode
from .cos.objects import Name, ObjectId, PdfString, Ref, Stream
from .dates import format_xmp_date, parse_pdf_date
from .doc import Document, build_document, extract_info
from .errors import BadProfile, IccError, InfoStringUndecodable, Unfixable
from .icc import PDFA_INTENT, find_output_intents, parse_icc_header
from .report import ValidationReport
from .rules import Level
from .textenc import UndecodableText, decode_text
from .validate import validate_bytes, validate_document
from .writer import serialize
from .xmp import DC, PAIRS, PDF, PDFAID, RDF, XMP

PACKET_ID = "W5M0MpCehiHzreSzNTczkc9d"
CONDITION_ID = "Custom"

# characters XML 1.0 cannot carry at all
_XML_ILLEGAL = re.compile("[\x00-\x08\x0b\x0c\x0e-\x1f\ufffe\uffff]")


@dataclass
class FixPlan:
    target_level: Level = Level.A1B
    icc_profile: bytes | None = None
    deterministic_timestamp: datetime | None = None
    applied_fixes: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.target_level = Level(self.target_level)
        if self.icc_profile is not None:
            try:
                self.header = parse_icc_header(self.icc_profile)
            except IccError as e:
                raise BadProfile(f"ICC profile rejected: {e}") from None
        else:
            self.header = None

    def timestamp(self) -> datetime:
        if self.deterministic_timestamp is not None:
            return self.deterministic_timestamp
        return datetime.now(timezone.utc).replace(microsecond=0)


def _xml_text(text: str) -> str:
    return escape(text).replace("\r", "&#13;")


def _info_texts(doc: Document) -> dict[str, str]:
    entries = {str(k): v for k, v in extract_info(doc)}
    out = {}
    for key, *_ in PAIRS:
        if key not in entries:
            continue
        try:
            text = decode_text(entries[key])
        except UndecodableText:
            raise InfoStringUndecodable(key) from None
        if _XML_ILLEGAL.search(text):
            raise InfoStringUndecodable(key)
        out[key] = text
    return out


def _xmp_date(text: str) -> str:
    parsed = parse_pdf_date(text)
    # an unparseable date is copied verbatim; DATE-1 reports it separately
    return format_xmp_date(parsed) if parsed else text


def sync_metadata(doc: Document, plan: FixPlan) -> bytes:
    """A fresh XMP packet mirroring the info dictionary (info wins)."""
    info = _info_texts(doc)
    shapes = {key: (ns, local, shape) for key, ns, local, shape in PAIRS}
    by_ns: dict[str, list[str]] = {DC: [], PDF: [], XMP: [], PDFAID: []}
    prefix = {DC: "dc", PDF: "pdf", XMP: "xmp", PDFAID: "pdfaid"}
    for key, *_ in PAIRS:
        if key not in info:
            continue
        ns, local, shape = shapes[key]
        tag = f"{prefix[ns]}:{local}"
        text = _xml_text(_xmp_date(info[key]) if shape == "date" else info[key])
        if shape == "alt":
            body = f'<rdf:Alt><rdf:li xml:lang="x-default">{text}</rdf:li></rdf:Alt>'
        elif shape == "seq":
            body = f"<rdf:Seq><rdf:li>{text}</rdf:li></rdf:Seq>"
        else:
            body = text
        by_ns[ns].append(f"<{tag}>{body}</{tag}>")
    by_ns[XMP].append(f"<xmp:MetadataDate>{format_xmp_date(plan.timestamp())}</xmp:MetadataDate>")
    conformance = "A" if plan.target_level is Level.A1A else "B"
    by_ns[PDFAID] += ["<pdfaid:part>1</pdfaid:part>", f"<pdfaid:conformance>{conformance}</pdfaid:conformance>"]

    lines = [
        f'<?xpacket begin="\ufeff" id="{PACKET_ID}"?>',
        '<x:xmpmeta xmlns:x="adobe:ns:meta/">',
        f'<rdf:RDF xmlns:rdf={quoteattr(RDF)}>',
    ]
    for ns, props in by_ns.items():
        if not props:
            continue
        lines.append(f'<rdf:Description rdf:about="" xmlns:{prefix[ns]}={quoteattr(ns)}>')
        lines.extend("  " + p for p in props)
        lines.append("</rdf:Description>")
    lines += ["</rdf:RDF>", "</x:xmpmeta>", '<?xpacket end="w"?>']
    return ("\n".join(lines) + "\n").encode("utf-8")


def _next_id(objects: dict) -> ObjectId:
    return ObjectId(max((oid.num for oid in objects), default=0) + 1, 0)


def _catalog_id(doc: Document) -> ObjectId:
    root = doc.file.trailer.get("Root")
    if not isinstance(root, Ref):
        raise Unfixable("trailer Root is not an indirect reference")
    return root.id


def install_metadata(doc: Document, objects: dict, packet: bytes) -> None:
    catalog_id = _catalog_id(doc)
    catalog = dict(objects[catalog_id])
    current = catalog.get("Metadata")
    oid = current.id if isinstance(current, Ref) else _next_id(objects)
    sdict = {Name("Type"): Name("Metadata"), Name("Subtype"): Name("XML"), Name("Length"): len(packet)}
    objects[oid] = Stream(sdict, packet)
    catalog[Name("Metadata")] = Ref(*oid)
    objects[catalog_id] = catalog


def inject_output_intent(doc: Document, plan: FixPlan, objects: dict) -> dict:
    """Ensure exactly one valid PDF/A output intent; edits ``objects`` in place.

    A valid existing intent is kept. Broken PDF/A intents are dropped and,
    if none valid remain, one built from ``plan.icc_profile`` is added.
    """
    entries = find_output_intents(doc)
    pdfa = [e for e in entries if e.subtype == PDFA_INTENT]
    valid = [e for e in pdfa if e.header is not None and not e.anomalies]
    broken = [e for e in pdfa if e not in valid]
    if valid and not broken:
        plan.applied_fixes.append("output-intent: existing intent kept")
        return objects
    if not valid and plan.icc_profile is None:
        raise BadProfile("no valid output intent and no ICC profile supplied")

    catalog_id = _catalog_id(doc)
    catalog = dict(objects[catalog_id])
    items = doc.resolve(catalog.get("OutputIntents"))
    items = list(items) if isinstance(items, list) else []
    drop = {e.index for e in broken}
    kept = [item for i, item in enumerate(items) if i not in drop]
    if broken:
        plan.applied_fixes.append(f"output-intent: removed {len(broken)} invalid intent(s)")
    if not valid:
        header = plan.header
        profile_id = _next_id(objects)
        profile = flate_encode(plan.icc_profile)
        objects[profile_id] = Stream(
            {Name("N"): header.components or 3, Name("Filter"): Name("FlateDecode"),
             Name("Length"): len(profile)},
            profile,
        )
        intent_id = _next_id(objects)
        objects[intent_id] = {
            Name("Type"): Name("OutputIntent"),
            Name("S"): Name(PDFA_INTENT),
            Name("OutputConditionIdentifier"): PdfString(CONDITION_ID.encode()),
            Name("Info"): PdfString(CONDITION_ID.encode()),
            Name("DestOutputProfile"): Ref(*profile_id),
        }
        kept.append(Ref(*intent_id))
        plan.applied_fixes.append("output-intent: added")
    catalog[Name("OutputIntents")] = kept
    objects[catalog_id] = catalog
    return objects


def convert(data: bytes, plan: FixPlan, *, name: str = "",
            strict: bool = False) -> tuple[bytes, ValidationReport, ValidationReport]:
    """Apply both fixes, rewrite, and re-validate.

    Returns (output bytes, report before, report after).
    """
    doc = build_document(open_file(data))
    level = plan.target_level
    before = validate_document(doc, level, strict, name=name)
    if doc.file.has_encrypt:
        raise Unfixable("encrypted files cannot be rewritten without their key")
    if level is Level.A1A and any(r in before.rule_ids for r in ("TAG-1", "TAG-2")):
        raise Unfixable("Level A needs a tagged document; structure trees are not synthesized")

    objects = dict(doc.file.objects)
    install_metadata(doc, objects, sync_metadata(doc, plan))
    plan.applied_fixes.append("metadata: XMP regenerated from the info dictionary")
    inject_output_intent(doc, plan, objects)
    trailer = {k: v for k, v in doc.file.trailer.items() if k in ("Root", "Info", "ID")}
    out = serialize(objects, trailer)
    after = validate_bytes(out, level, strict, name=name)
    return out, before, after
