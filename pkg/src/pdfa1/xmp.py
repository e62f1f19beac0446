"""XMP metadata: extraction from the catalog, a small RDF/XML reader, and
the info-dictionary correspondence check."""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .cos.objects import Stream
from .dates import parse_pdf_date, parse_xmp_date, to_utc
from .errors import MetadataNotAStream, NoRdfRoot, XmlMalformed
from .textenc import UndecodableText, decode_text

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
DC = "http://purl.org/dc/elements/1.1/"
PDF = "http://ns.adobe.com/pdf/1.3/"
XMP = "http://ns.adobe.com/xap/1.0/"
PDFAID = "http://www.aiim.org/pdfa/ns/id/"
XML_NS = "http://www.w3.org/XML/1998/namespace"

PREFIXES = {DC: "dc", PDF: "pdf", XMP: "xmp", PDFAID: "pdfaid", RDF: "rdf"}

# (info key, namespace, property, value shape)
PAIRS = (
    ("Title", DC, "title", "alt"),
    ("Author", DC, "creator", "seq"),
    ("Subject", DC, "description", "alt"),
    ("Keywords", PDF, "Keywords", "text"),
    ("Producer", PDF, "Producer", "text"),
    ("Creator", XMP, "CreatorTool", "text"),
    ("CreationDate", XMP, "CreateDate", "date"),
    ("ModDate", XMP, "ModifyDate", "date"),
)
DATE_KEYS = frozenset(k for k, _, _, shape in PAIRS if shape == "date")

_DTD = re.compile(rb"<!(?:DOCTYPE|ENTITY)")


@dataclass
class XmpPacket:
    raw: bytes
    properties: dict[tuple[str, str], object] = field(default_factory=dict)
    pdfa_id: tuple[int | None, str | None] | None = None

    def text(self, ns: str, local: str) -> str | None:
        return first_text(self.properties.get((ns, local)))


@dataclass(frozen=True)
class Mismatch:
    key: str
    info_value: str | None
    xmp_value: str | None
    note: str = ""


def first_text(value) -> str | None:
    """Single text view of a property: x-default of an Alt, first of a list."""
    if value is None or isinstance(value, str):
        return value
    if isinstance(value, list):
        return value[0] if value else None
    if isinstance(value, dict):
        if "x-default" in value:
            return value["x-default"]
        return next(iter(value.values()), None)
    return None


def extract_xmp(doc) -> bytes | None:
    value = doc.resolve(doc.catalog.get("Metadata"))
    if value is None:
        return None
    if not isinstance(value, Stream):
        raise MetadataNotAStream(f"catalog Metadata is a {type(value).__name__}, not a stream")
    return doc.decode(value)


def _split(tag: str) -> tuple[str, str]:
    if tag.startswith("{"):
        ns, _, local = tag[1:].partition("}")
        return ns, local
    return "", tag


def _value_of(elem: ET.Element):
    for child in elem:
        ns, local = _split(child.tag)
        if ns != RDF:
            continue
        items = [li for li in child if _split(li.tag) == (RDF, "li")]
        if local == "Alt":
            return {li.get(f"{{{XML_NS}}}lang", "x-default"): li.text or "" for li in items}
        if local in ("Seq", "Bag"):
            return [li.text or "" for li in items]
    resource = elem.get(f"{{{RDF}}}resource")
    if resource is not None:
        return resource
    return elem.text or ""


def parse_xmp(data: bytes) -> XmpPacket:
    """Read the properties of every ``rdf:Description`` in a packet.

    Alt containers become ``{lang: text}``, Seq and Bag become lists and
    everything else plain text. Documents carrying a DTD are refused.
    """
    data = bytes(data)
    dtd = _DTD.search(data)
    if dtd:
        raise XmlMalformed(dtd.start(), "document type declarations are not accepted")
    try:
        root = ET.fromstring(data)
    except ET.ParseError as e:
        raise XmlMalformed(e.position, str(e)) from None
    except (ValueError, LookupError) as e:
        raise XmlMalformed(0, str(e)) from None

    rdf = root if _split(root.tag) == (RDF, "RDF") else root.find(f".//{{{RDF}}}RDF")
    if rdf is None:
        raise NoRdfRoot("packet has no rdf:RDF element")
    props: dict[tuple[str, str], object] = {}
    for desc in rdf.iter(f"{{{RDF}}}Description"):
        for attr, value in desc.attrib.items():
            ns, local = _split(attr)
            if ns and ns not in (RDF, XML_NS):
                props[(ns, local)] = value
        for child in desc:
            props[_split(child.tag)] = _value_of(child)

    pdfa_id = None
    part_text = first_text(props.get((PDFAID, "part")))
    conf_text = first_text(props.get((PDFAID, "conformance")))
    if part_text is not None or conf_text is not None:
        part = int(part_text.strip()) if part_text and part_text.strip().isdigit() else None
        conformance = conf_text.strip() if conf_text else None
        pdfa_id = (part, conformance)
    return XmpPacket(data, props, pdfa_id)


def _dates_equal(info_text: str, xmp_text: str) -> bool:
    a, b = parse_pdf_date(info_text), parse_xmp_date(xmp_text)
    if a is None or b is None:
        # malformed dates are reported elsewhere; here only identical text agrees
        return info_text == xmp_text
    return to_utc(a) == to_utc(b)


def correspondence(packet: XmpPacket, info, info_side_only: bool = False) -> list[Mismatch]:
    """Compare the eight info/XMP property pairs.

    ``info`` is the list of (key, raw bytes) pairs from
    :func:`pdfa1.doc.extract_info`. With ``info_side_only`` a property
    present only in XMP is not a mismatch.
    """
    info_map = {str(k): v for k, v in info}
    out: list[Mismatch] = []
    for key, ns, local, shape in PAIRS:
        xmp_value = packet.text(ns, local)
        raw = info_map.get(key)
        if raw is None:
            if xmp_value is not None and not info_side_only:
                out.append(Mismatch(key, None, xmp_value, "absent from the info dictionary"))
            continue
        try:
            info_value = decode_text(raw)
        except UndecodableText as e:
            out.append(Mismatch(key, None, xmp_value, f"info string undecodable: {e}"))
            continue
        if xmp_value is None:
            out.append(Mismatch(key, info_value, None, "absent from XMP"))
        elif shape == "date":
            if not _dates_equal(info_value, xmp_value):
                out.append(Mismatch(key, info_value, xmp_value, "dates differ"))
        elif info_value != xmp_value:
            out.append(Mismatch(key, info_value, xmp_value, "values differ"))
    return out
