from __future__ import annotations

import io
import random

import pytest

from conftest import doc_for
from pdfa1.cos import open_file
from pdfa1.doc import FeatureKind, build_document
from pdfa1.errors import InconsistentSpec, PdfError
from pdfa1.rules import CATALOG
from pdfa1.testkit import (RULE_CASES, FixtureSpec, build, corpus, make_truetype_font,
                           make_type1_font, mutate, write_corpus)


@pytest.mark.parametrize("toggles", [
    ("embedded-font", "missing-font-file"), ("bogus",), ("xmp=maybe",), ("version=1",),
    ("shadowed-encrypt",), ("encrypt", "incremental-update", "shadowed-encrypt"),
    ("font-in-form", "no-font"),
])
def test_inconsistent(toggles):
    with pytest.raises(InconsistentSpec):
        build(FixtureSpec.of(*toggles))


def test_spec_name():
    assert FixtureSpec().name == "golden"
    assert FixtureSpec.of("tagged", "encrypt").name == "encrypt+tagged"


def test_sound_annot_feature():
    assert [f.kind for f in doc_for("sound-annot").features] == [FeatureKind.SOUND_ANNOT]


def test_golden_has_expected_parts():
    doc = doc_for()
    assert len(doc.pages) == 1 and len(doc.fonts) == 1 and doc.features == []
    assert "Metadata" in doc.catalog and "OutputIntents" in doc.catalog


def test_corpus_contract(corpus):
    assert sum(map(len, corpus.values())) < 5 * 1024 * 1024
    assert all(len(d) < 50 * 1024 for d in corpus.values())
    for rule in CATALOG:
        assert f"{rule.id.lower()}-negative" in corpus and f"{rule.id.lower()}-positive" in corpus
    assert set(RULE_CASES) == {r.id for r in CATALOG}


def test_corpus_deterministic(corpus):
    assert corpus == _fresh()


def _fresh():
    from pdfa1 import testkit
    return testkit.corpus()


def test_write_corpus(tmp_path, corpus):
    paths = write_corpus(tmp_path)
    assert len(paths) == len(corpus)
    assert all(p.suffix == ".pdf" and "=" not in p.name for p in paths)


def test_truetype_program_loads():
    ttLib = pytest.importorskip("fontTools.ttLib")
    font = ttLib.TTFont(io.BytesIO(make_truetype_font()))
    assert {"glyf", "head", "hmtx", "loca", "maxp"} <= set(font.keys())
    font["glyf"]  # forces a parse of the glyph table


def test_type1_program_decrypts(tmp_path):
    t1Lib = pytest.importorskip("fontTools.t1Lib")
    program, l1, l2, l3 = make_type1_font()
    assert l1 + l2 + l3 == len(program)
    path = tmp_path / "f.pfa"
    path.write_bytes(program)
    font = t1Lib.T1Font(str(path))
    font.parse()
    assert "CharStrings" in font.font and ".notdef" in font.font["CharStrings"]


def test_third_party_parser_opens_fixtures(corpus):
    pikepdf = pytest.importorskip("pikepdf")
    for name, data in corpus.items():
        if name == "enc-1-negative":
            continue
        with pikepdf.open(io.BytesIO(data)) as pdf:
            assert len(pdf.pages) >= 1, name


def test_mutation_is_seeded(golden):
    a = mutate(golden, random.Random(7))
    assert a == mutate(golden, random.Random(7))
    assert a != golden
    assert len(mutate(golden * 4, random.Random(1))) <= 50 * 1024


def test_mutants_fail_cleanly(golden):
    rng = random.Random(11)
    for _ in range(200):
        try:
            build_document(open_file(mutate(golden, rng)))
        except PdfError:
            pass
