from __future__ import annotations

from collections import Counter

import pytest

from conftest import doc_for, make_pdf
from pdfa1 import rules
from pdfa1.cos import open_file
from pdfa1.doc import build_document
from pdfa1.errors import ConfigError
from pdfa1.rules import (CATALOG, DISABLEABLE, RULES, Level, Severity, applicable_rules, check_dates,
                         check_version, evaluate, load_config, parse_rule_list)
from pdfa1.validate import validate_document


def ids(doc, level="A1b", strict=False, **kw):
    return [v.rule_id for v in evaluate(doc, Level(level), strict, **kw) if not v.warning]


def test_catalog_shape():
    assert len(RULES) == len(CATALOG) == 27
    assert all(r.levels for r in CATALOG)
    assert {r.id for r in CATALOG if Level.A1B not in r.levels} == {"TAG-1", "TAG-2"}
    assert DISABLEABLE == {"SELF-5", "DYN-1", "FIL-2", "ENC-1"}
    assert [r.id for r in CATALOG if r.severity is Severity.RESTRICTED] == ["FIL-2"]


def test_a1a_checks_superset():
    a = {r.id for r in applicable_rules(Level.A1A)}
    b = {r.id for r in applicable_rules(Level.A1B)}
    assert b < a


def _versioned(header: bytes, catalog_version: bytes | None = None):
    cat = b"<< /Type /Catalog /Pages 2 0 R" + (b" /Version /" + catalog_version if catalog_version else b"") + b" >>"
    data = make_pdf({1: cat, 2: b"<< /Type /Pages /Kids [] /Count 0 >>"}, b"/Root 1 0 R", header)
    return build_document(open_file(data))


@pytest.mark.parametrize("header, expected", [(b"1.4", []), (b"1.3", []), (b"1.7", ["VER-1"])])
def test_version(header, expected):
    assert [v.rule_id for v in check_version(_versioned(header))] == expected


def test_catalog_version_overrides():
    (v,) = check_version(_versioned(b"1.4", b"1.5"))
    assert v.object_path == "catalog → Version"


def test_golden_clean():
    assert evaluate(doc_for(), Level.A1B) == []


@pytest.mark.parametrize("toggles, expected", [
    (("external-stream",), ["SELF-1"]),
    (("launch-action",), ["SELF-3"]),
    (("movie-annot",), ["AV-2"]),
    (("javascript-action",), ["DYN-1"]),
    (("truetype-font",), []),
    (("missing-font-file",), ["FNT-2"]),
    (("no-font",), []),
    (("xmp=absent",), ["META-1"]),
    (("xmp=mismatched",), ["META-3"]),
    (("bad-date",), ["DATE-1"]),
    (("jpx-filter",), ["FIL-1"]),
    (("encrypt",), ["ENC-1"]),
    (("incremental-update", "shadowed-encrypt"), []),
    (("output-intent=absent",), ["CLR-1"]),
    (("output-intent=absent", "no-device-color"), []),
])
def test_examples(toggles, expected):
    assert sorted(ids(doc_for(*toggles))) == sorted(expected)


def test_meta3_names_key():
    (v,) = evaluate(doc_for("xmp=mismatched"), Level.A1B)
    assert v.object_path == "Info → Title"


def test_lzw_is_warning_unless_strict():
    doc = doc_for("lzw-filter")
    (w,) = evaluate(doc, Level.A1B)
    assert w.rule_id == "FIL-2" and w.warning
    assert validate_document(doc).conformant
    assert ids(doc, strict=True) == ["FIL-2"]


def test_uri_only_in_strict():
    doc = doc_for("uri-action")
    assert ids(doc) == []
    assert ids(doc, strict=True) == ["SELF-5"]


@pytest.mark.parametrize("toggles, expected", [
    (("pdfaid=A", "tagged"), []),
    (("pdfaid=A", "tagged=unmarked"), ["TAG-1"]),
    (("pdfaid=A", "tagged=no-struct-tree"), ["TAG-2"]),
])
def test_tagging(toggles, expected):
    assert ids(doc_for(*toggles), "A1a") == expected


def test_b_identified_file_fails_a():
    assert ids(doc_for(), "A1a") == ["META-4", "TAG-1", "TAG-2"]


@pytest.mark.parametrize("date, ok", [
    (b"D:20070417120000Z", True), (b"April 17, 2007", False), (None, True),
])
def test_date_rule(date, ok):
    info = b"<< /Producer (x)" + (b" /CreationDate (" + date + b")" if date else b"") + b" >>"
    data = make_pdf({1: b"<< /Type /Catalog /Pages 2 0 R >>", 2: b"<< /Type /Pages /Kids [] /Count 0 >>",
                     3: info}, b"/Root 1 0 R /Info 3 0 R")
    assert (check_dates(build_document(open_file(data))) == []) is ok


def test_clr2_per_bad_intent():
    found = evaluate(doc_for("output-intent=extra-bad"), Level.A1B)
    assert [v.rule_id for v in found] == ["CLR-2"]
    assert found[0].object_path == "catalog → OutputIntents[1]"


def test_clr_strict_without_device_colour():
    assert ids(doc_for("output-intent=absent", "no-device-color"), strict=True) == ["CLR-1"]


def test_sorted_by_catalog_then_path(corpus):
    for data in corpus.values():
        try:
            doc = build_document(open_file(data))
        except Exception:
            continue
        found = evaluate(doc, Level.A1A, True)
        assert found == sorted(found, key=rules.sort_key)


def test_disable():
    doc = doc_for("encrypt", "javascript-action")
    assert ids(doc) == ["DYN-1", "ENC-1"]
    assert ids(doc, disabled={"ENC-1", "DYN-1"}) == []
    with pytest.raises(ConfigError):
        evaluate(doc, Level.A1B, disabled={"FNT-1"})


def test_rules_evaluated_stat():
    r = validate_document(doc_for(), disabled=("ENC-1",))
    assert r.stats.rules_evaluated == len(applicable_rules(Level.A1B)) - 1


def test_engine_violation(monkeypatch):
    def boom(doc):
        raise RuntimeError("synthetic")
    monkeypatch.setattr(rules, "check_fonts", boom)
    (v,) = evaluate(doc_for(), Level.A1B)
    assert (v.rule_id, v.object_path) == ("ENGINE", "fonts")
    assert "synthetic" in v.message
    with pytest.raises(RuntimeError):
        evaluate(doc_for(), Level.A1B, raise_internal=True)


def test_monotone_and_deterministic(corpus):
    for name, data in corpus.items():
        doc = build_document(open_file(data))
        for strict in (False, True):
            b = evaluate(doc, Level.A1B, strict)
            a = evaluate(doc, Level.A1A, strict)
            key = lambda v: (v.rule_id, v.object_path)
            assert not Counter(map(key, b)) - Counter(map(key, a)), name
            assert evaluate(doc, Level.A1B, strict) == b


def test_parse_rule_list():
    assert parse_rule_list(" enc-1 , DYN-1,") == ("DYN-1", "ENC-1")
    with pytest.raises(ConfigError, match="unknown"):
        parse_rule_list("NOPE-1")
    with pytest.raises(ConfigError, match="may be disabled"):
        parse_rule_list("META-1")


def test_load_config():
    cfg = load_config("[pdfa1]\nstrict = yes\ndisable = ENC-1, FIL-2\ninfo_side_only = true\n")
    assert (cfg.strict, cfg.disabled, cfg.info_side_only) == (True, ("ENC-1", "FIL-2"), True)
    assert load_config("[pdfa1]\n").disabled == ()


@pytest.mark.parametrize("text", ["strict = yes", "[other]\n", "[pdfa1]\nstrict = maybe\n",
                                  "[pdfa1]\ncolour = red\n", "[pdfa1\n"])
def test_bad_config(text):
    with pytest.raises(ConfigError):
        load_config(text)


def test_info_side_only_still_sees_info_keys():
    doc = doc_for("xmp=one-sided")
    assert ids(doc) == ids(doc, info_side_only=True) == ["META-3"]
