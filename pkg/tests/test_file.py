from __future__ import annotations

import pytest

from conftest import make_pdf
from pdfa1 import testkit
from pdfa1.cos import open_file, parse_xref_chain
from pdfa1.cos.document import resolve
from pdfa1.cos.objects import ObjectId, Ref
from pdfa1.errors import (
    BrokenXref,
    NotAPdf,
    ResolutionCycle,
    XrefCycle,
    XrefOutOfBounds,
    XrefStreamUnsupported,
)

MINIMAL = make_pdf(
    {1: b"<< /Type /Catalog /Pages 2 0 R >>", 2: b"<< /Type /Pages /Kids [] /Count 0 >>"},
    b"/Root 1 0 R",
)


def test_open_minimal():
    f = open_file(MINIMAL)
    assert f.version == (1, 4)
    assert not f.has_encrypt and not f.recovered
    assert f.revisions == 1
    assert f.xref.entries[ObjectId(1, 0)].in_use
    assert f.resolve(f.trailer["Root"])["Type"] == "Catalog"


def test_not_a_pdf():
    with pytest.raises(NotAPdf):
        open_file(b"GIF89a" + bytes(100))


def test_header_after_junk_is_found():
    assert open_file(b"junk\n" + MINIMAL).version == (1, 4)


def test_incremental_update_newest_wins():
    data = testkit.build(testkit.FixtureSpec.of("incremental-update"))
    f = open_file(data)
    assert f.revisions == 2
    info = f.resolve(f.trailer["Info"])
    assert info["Title"] == b"Report"
    # the original revision alone still reads the old title
    first = data[: data.index(b"%%EOF") + 6]
    assert open_file(first).resolve(open_file(first).trailer["Info"])["Title"] == b"Draft"


def test_xref_cycle():
    # a Prev pointing at its own section
    xref_at = MINIMAL.index(b"\nxref") + 1
    data = MINIMAL.replace(b"/Root 1 0 R", b"/Root 1 0 R /Prev %d" % xref_at)
    with pytest.raises(XrefCycle):
        parse_xref_chain(data, xref_at)
    # open_file falls back to scanning and still finds the catalog
    f = open_file(data)
    assert f.recovered and f.notes


def test_xref_offset_out_of_bounds():
    with pytest.raises(XrefOutOfBounds):
        parse_xref_chain(MINIMAL, len(MINIMAL) + 10)


def test_broken_xref_recovers():
    data = testkit.build(testkit.FixtureSpec.of("broken-xref"))
    f = open_file(data)
    assert f.recovered
    assert any("rebuilt" in n for n in f.notes)
    assert f.resolve(f.trailer["Root"])["Type"] == "Catalog"


def test_xref_stream_rejected():
    body = b"%PDF-1.5\n1 0 obj\n<< /Type /XRef /Size 2 /W [1 2 1] /Length 0 >>\nstream\n\nendstream\nendobj\n"
    data = body + b"startxref\n9\n%%EOF\n"
    with pytest.raises(XrefStreamUnsupported):
        open_file(data)


def test_no_catalog_anywhere():
    with pytest.raises(BrokenXref):
        open_file(b"%PDF-1.4\n1 0 obj\n<< /A 1 >>\nendobj\n%%EOF")


def test_resolution_cycle():
    data = make_pdf({1: b"<< /Type /Catalog /Pages 2 0 R >>", 2: b"3 0 R", 3: b"2 0 R"}, b"/Root 1 0 R")
    f = open_file(data)
    with pytest.raises(ResolutionCycle) as e:
        resolve(f, Ref(2, 0))
    assert e.value.chain[0] == (2, 0)


def test_absent_object_resolves_to_none():
    f = open_file(MINIMAL)
    assert f.resolve(Ref(99, 0)) is None


@pytest.mark.parametrize("name", sorted(testkit.corpus()))
def test_corpus_opens_without_recovery(name, corpus):
    f = open_file(corpus[name])
    assert f.recovered == (name == "broken-xref")
