from __future__ import annotations

from datetime import datetime, timezone

import pytest

from pdfa1 import testkit
from pdfa1.cos import open_file
from pdfa1.doc import build_document

FIXED_TIME = datetime(2020, 1, 2, 3, 4, 5, tzinfo=timezone.utc)


@pytest.fixture(scope="session")
def golden() -> bytes:
    return testkit.build()


@pytest.fixture(scope="session")
def icc_profile() -> bytes:
    return testkit.make_icc_profile()


@pytest.fixture(scope="session")
def corpus() -> dict[str, bytes]:
    return testkit.corpus()


def doc_for(*toggles):
    return build_document(open_file(testkit.build(testkit.FixtureSpec.of(*toggles))))


def make_pdf(objects: dict[int, bytes], trailer: bytes, version: bytes = b"1.4") -> bytes:
    """Tiny hand-rolled emitter for one-off structural test files."""
    out = bytearray(b"%PDF-" + version + b"\n")
    offsets = {}
    for num in sorted(objects):
        offsets[num] = len(out)
        out += b"%d 0 obj\n" % num + objects[num] + b"\nendobj\n"
    xref = len(out)
    size = max(objects) + 1
    out += b"xref\n0 %d\n0000000000 65535 f \n" % size
    for num in range(1, size):
        out += (b"%010d 00000 n \n" % offsets[num]) if num in offsets else b"0000000000 00000 f \n"
    out += b"trailer\n<< /Size %d " % size + trailer + b" >>\nstartxref\n%d\n%%%%EOF\n" % xref
    return bytes(out)


def census(doc) -> tuple:
    """Page, font and feature censuses used by round-trip checks."""
    pages = len(doc.pages)
    fonts = sorted((f.subtype or "", f.page_index, f.resource_name, f.location) for f in doc.fonts)
    features = sorted((f.kind.value, f.location) for f in doc.features)
    return pages, fonts, features


_CRITERIA: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion implemented by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark and (report.when == "call" or report.outcome != "passed"):
        title = mark.args[1] + (" [manual]" if mark.kwargs.get("manual") else "")
        _CRITERIA.setdefault(mark.args[0], []).append((title, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title = _CRITERIA[n][0][0]
        outcomes = {o for _, o in _CRITERIA[n]}
        verdict = "PASS" if outcomes == {"passed"} else "FAIL"
        if title.endswith("[manual]"):
            verdict = f"MANUAL (record check {verdict})"
        terminalreporter.write_line(f"criterion {n}: {verdict}  {title}")
