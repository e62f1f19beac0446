from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXED_TIME, doc_for, make_pdf
from pdfa1.cos import open_file
from pdfa1.doc import build_document, extract_info
from pdfa1.errors import MetadataNotAStream, NoRdfRoot, XmlMalformed
from pdfa1.fixup import FixPlan, sync_metadata
from pdfa1.xmp import DC, PDF, PDFAID, XMP, Mismatch, correspondence, extract_xmp, parse_xmp

RDF_OPEN = ('<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#">'
            '<rdf:Description rdf:about="" xmlns:dc="http://purl.org/dc/elements/1.1/" '
            'xmlns:pdf="http://ns.adobe.com/pdf/1.3/" xmlns:xmp="http://ns.adobe.com/xap/1.0/" '
            'xmlns:pdfaid="http://www.aiim.org/pdfa/ns/id/"{attrs}>')
RDF_CLOSE = "</rdf:Description></rdf:RDF>"


def packet(body: str, attrs: str = "") -> bytes:
    return (RDF_OPEN.format(attrs=attrs) + body + RDF_CLOSE).encode()


def test_alt_title():
    p = parse_xmp(packet('<dc:title><rdf:Alt><rdf:li xml:lang="x-default">Report</rdf:li></rdf:Alt></dc:title>'))
    assert p.properties[(DC, "title")] == {"x-default": "Report"}


def test_identification():
    p = parse_xmp(packet("<pdfaid:part>1</pdfaid:part><pdfaid:conformance>B</pdfaid:conformance>"))
    assert p.pdfa_id == (1, "B")


def test_attribute_form_and_seq():
    p = parse_xmp(packet("<dc:creator><rdf:Seq><rdf:li>A</rdf:li><rdf:li>B</rdf:li></rdf:Seq></dc:creator>",
                         ' pdfaid:part="1" pdfaid:conformance="A" pdf:Producer="x"'))
    assert p.properties[(DC, "creator")] == ["A", "B"]
    assert p.pdfa_id == (1, "A")
    assert p.properties[(PDF, "Producer")] == "x"


def test_unknown_property_kept():
    p = parse_xmp(packet('<foo:bar xmlns:foo="urn:foo">baz</foo:bar>'))
    assert p.properties[("urn:foo", "bar")] == "baz"


def test_raw_preserved():
    raw = packet("<pdf:Producer>x</pdf:Producer>")
    assert parse_xmp(raw).raw == raw


def test_not_xml():
    with pytest.raises(XmlMalformed):
        parse_xmp(b"not xml")


def test_dtd_rejected():
    evil = b'<?xml version="1.0"?><!DOCTYPE x [<!ENTITY a "aaaa">]><x>&a;</x>'
    with pytest.raises(XmlMalformed) as e:
        parse_xmp(evil)
    assert e.value.position == evil.index(b"<!DOCTYPE")


def test_no_rdf_root():
    with pytest.raises(NoRdfRoot):
        parse_xmp(b"<x:xmpmeta xmlns:x='adobe:ns:meta/'/>")


def test_extract():
    assert b"pdfaid:part" in extract_xmp(doc_for())
    assert extract_xmp(doc_for("xmp=absent")) is None
    with pytest.raises(MetadataNotAStream):
        extract_xmp(doc_for("xmp=not-stream"))


def info(**kw):
    return [(k, v.encode("latin-1") if isinstance(v, str) else v) for k, v in kw.items()]


def test_equal_title():
    p = parse_xmp(packet('<dc:title><rdf:Alt><rdf:li xml:lang="x-default">Report</rdf:li></rdf:Alt></dc:title>'))
    assert correspondence(p, info(Title="Report")) == []


def test_title_mismatch():
    p = parse_xmp(packet('<dc:title><rdf:Alt><rdf:li xml:lang="x-default">Draft</rdf:li></rdf:Alt></dc:title>'))
    assert correspondence(p, info(Title="Report")) == [Mismatch("Title", "Report", "Draft", "values differ")]


def test_one_sided():
    p = parse_xmp(packet(""))
    (m,) = correspondence(p, info(Keywords="archive"))
    assert (m.key, m.info_value, m.xmp_value) == ("Keywords", "archive", None)


def test_xmp_only_property_is_bidirectional_by_default():
    p = parse_xmp(packet("<pdf:Keywords>k</pdf:Keywords>"))
    assert [m.key for m in correspondence(p, [])] == ["Keywords"]
    assert correspondence(p, [], info_side_only=True) == []


def test_dates_compared_in_utc():
    p = parse_xmp(packet("<xmp:CreateDate>2007-04-17T14:00:00+02:00</xmp:CreateDate>"))
    assert correspondence(p, info(CreationDate="D:20070417120000Z")) == []
    assert correspondence(p, info(CreationDate="D:20070417120001Z"))[0].key == "CreationDate"


def test_utf16_info_decoded():
    p = parse_xmp(packet('<dc:title><rdf:Alt><rdf:li xml:lang="x-default">Żółw</rdf:li></rdf:Alt></dc:title>'))
    assert correspondence(p, info(Title=b"\xfe\xff" + "Żółw".encode("utf-16-be"))) == []


def test_undecodable_info_string():
    p = parse_xmp(packet(""))
    (m,) = correspondence(p, info(Title=b"\xfe\xff\xd8\x00"))
    assert m.key == "Title" and "undecodable" in m.note


text = st.text(st.characters(blacklist_categories=("Cs", "Cc")), min_size=1, max_size=30)


def _doc_with_info(entries: dict[str, bytes]):
    def lit(b):
        return b"<" + b.hex().encode() + b">"
    info_body = b"<< " + b" ".join(b"/" + k.encode() + b" " + lit(v) for k, v in entries.items()) + b" >>"
    objs = {1: b"<< /Type /Catalog /Pages 2 0 R >>", 2: b"<< /Type /Pages /Kids [] /Count 0 >>", 3: info_body}
    return build_document(open_file(make_pdf(objs, b"/Root 1 0 R /Info 3 0 R")))


def _encode(s: str) -> bytes:
    try:
        return s.encode("latin-1") if all(0x20 <= ord(c) < 0x7F for c in s) else b"\xfe\xff" + s.encode("utf-16-be")
    except UnicodeEncodeError:
        return b"\xfe\xff" + s.encode("utf-16-be")


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.sampled_from(["Title", "Author", "Subject", "Keywords", "Producer", "Creator"]), text),
       st.sampled_from([None, "D:20070417120000Z", "D:1999", "D:20200229235959+05'30'"]))
def test_generated_packet_roundtrips(entries, date):
    raw = {k: _encode(v) for k, v in entries.items()}
    if date:
        raw["CreationDate"] = date.encode()
    doc = _doc_with_info(raw)
    p = parse_xmp(sync_metadata(doc, FixPlan(deterministic_timestamp=FIXED_TIME)))
    assert correspondence(p, extract_info(doc)) == []
    assert p.pdfa_id == (1, "B")
    assert p.text(XMP, "MetadataDate") == "2020-01-02T03:04:05Z"
    for key, value in entries.items():
        ns, local = {"Title": (DC, "title"), "Author": (DC, "creator"), "Subject": (DC, "description"),
                     "Keywords": (PDF, "Keywords"), "Producer": (PDF, "Producer"),
                     "Creator": (XMP, "CreatorTool")}[key]
        assert p.text(ns, local) == value
    assert (PDFAID, "part") in p.properties


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.sampled_from(["Title", "Author", "Keywords"]), st.text("abc ", min_size=1, max_size=4)),
       st.dictionaries(st.sampled_from(["Title", "Author", "Keywords"]), st.text("abc ", min_size=1, max_size=4)))
def test_empty_correspondence_iff_sync_is_identity(info_side, xmp_side):
    """Zero mismatches exactly when regenerating XMP from info would not
    change any of the compared properties."""
    tags = {"Title": ('<dc:title><rdf:Alt><rdf:li xml:lang="x-default">{}</rdf:li></rdf:Alt></dc:title>', DC, "title"),
            "Author": ("<dc:creator><rdf:Seq><rdf:li>{}</rdf:li></rdf:Seq></dc:creator>", DC, "creator"),
            "Keywords": ("<pdf:Keywords>{}</pdf:Keywords>", PDF, "Keywords")}
    existing = parse_xmp(packet("".join(tags[k][0].format(v) for k, v in xmp_side.items())))
    doc = _doc_with_info({k: v.encode() for k, v in info_side.items()})
    synced = parse_xmp(sync_metadata(doc, FixPlan(deterministic_timestamp=FIXED_TIME)))
    identity = all(existing.text(ns, local) == synced.text(ns, local) for _, ns, local in tags.values())
    assert (correspondence(existing, extract_info(doc)) == []) == identity
