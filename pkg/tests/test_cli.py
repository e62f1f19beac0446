from __future__ import annotations

import io
import json
import os
import subprocess
import sys

import pytest

from pdfa1.cli import expand_inputs, main, parse_args
from pdfa1.errors import ConfigError
from pdfa1.report import UsageError
from pdfa1.rules import Level
from pdfa1.testkit import FixtureSpec, build, make_icc_profile


class Stream(io.TextIOWrapper):
    def __init__(self, data: bytes = b""):
        super().__init__(io.BytesIO(data), encoding="utf-8")

    def bytes(self) -> bytes:
        self.flush()
        return self.buffer.getvalue()


def run(argv, stdin: bytes = b""):
    out, err = Stream(), Stream()
    code = main(argv, stdout=out, stdin=Stream(stdin), stderr=err)
    return code, out.bytes(), err.bytes().decode()


@pytest.fixture
def files(tmp_path):
    def write(name, *toggles):
        path = tmp_path / name
        path.write_bytes(build(FixtureSpec.of(*toggles)))
        return str(path)
    return write


def test_defaults():
    c = parse_args(["validate", "x.pdf"])
    assert (c.level, c.format, c.strict, c.jobs, c.inputs) == (Level.A1B, "text", False, 1, ["x.pdf"])


def test_level_flag():
    assert parse_args(["validate", "--level", "a1a", "x.pdf"]).level is Level.A1A


@pytest.mark.parametrize("argv", [
    ["validate", "--level", "a2", "x.pdf"], ["validate"], ["frobnicate", "x"], ["validate", "--jobs", "0", "x"],
    ["validate", "--bogus", "x"], ["validate", "--disable", "FNT-1", "x"],
    ["convert", "--out", "o.pdf", "a.pdf", "b.pdf"], ["convert", "--deterministic", "soon", "x"],
])
def test_usage_errors(argv):
    with pytest.raises((UsageError, ConfigError)):
        parse_args(argv)
    code, _, err = run(argv)
    assert code == 3 and err.startswith("pdfa1: usage error:") and err.count("\n") == 1


def test_config_file(tmp_path):
    cfg = tmp_path / "pdfa1.ini"
    cfg.write_text("[pdfa1]\nstrict = yes\ndisable = ENC-1\n")
    c = parse_args(["validate", "--config", str(cfg), "--disable", "dyn-1", "x.pdf"])
    assert c.strict and c.disabled_rules == ("DYN-1", "ENC-1")
    assert run(["validate", "--config", str(tmp_path / "nope.ini"), "x"])[0] == 3


def test_validate_golden(files):
    code, out, _ = run(["validate", files("g.pdf")])
    assert code == 0 and out.startswith(b"CONFORMANT (PDF/A-1b)")


def test_validate_sound_json(files):
    code, out, _ = run(["validate", "--format", "json", files("s.pdf", "sound-annot")])
    assert code == 1
    assert "AV-1" in [v["ruleId"] for v in json.loads(out)["violations"]]


def test_stdin():
    code, out, _ = run(["validate", "-"], stdin=build())
    assert code == 0 and b"<stdin>" in out


def test_unreadable(tmp_path):
    bad = tmp_path / "bad.pdf"
    bad.write_bytes(b"hello")
    code, out, _ = run(["validate", str(bad)])
    assert code == 2 and out.startswith(b"UNREADABLE")
    assert run(["validate", str(tmp_path / "missing.pdf")])[0] == 2


def test_worst_exit_and_order(files, tmp_path):
    names = [files("a.pdf"), files("b.pdf", "sound-annot"), files("c.pdf")]
    code, out, _ = run(["validate", "--format", "json", "--jobs", "3"] + names)
    assert code == 1
    assert [r["input"] for r in json.loads(out)] == names
    assert run(["validate", "--format", "json"] + names)[1] == out


def test_directory_recursion_skips_symlinks(tmp_path, files):
    sub = tmp_path / "d" / "e"
    sub.mkdir(parents=True)
    (sub / "x.pdf").write_bytes(build())
    (tmp_path / "d" / "y.PDF").write_bytes(build())
    (tmp_path / "d" / "z.txt").write_text("no")
    os.symlink(sub, tmp_path / "d" / "link")
    os.symlink(sub / "x.pdf", tmp_path / "d" / "w.pdf")
    found = expand_inputs([str(tmp_path / "d")])
    assert found == sorted([str(sub / "x.pdf"), str(tmp_path / "d" / "y.PDF")])


def test_convert(files, tmp_path):
    icc = tmp_path / "p.icc"
    icc.write_bytes(make_icc_profile())
    src = files("in.pdf", "xmp=absent", "output-intent=absent")
    code, out, _ = run(["convert", "--icc", str(icc), "--deterministic", "2020-01-01T00:00:00Z", src])
    assert code == 0
    assert os.path.exists(tmp_path / "in.pdfa.pdf")
    assert b"after : conformant" in out
    assert run(["validate", str(tmp_path / "in.pdfa.pdf")])[0] == 0


def test_convert_to_stdout(files, tmp_path):
    icc = tmp_path / "p.icc"
    icc.write_bytes(make_icc_profile())
    argv = ["convert", "--icc", str(icc), "--deterministic", "2020-01-01T00:00:00Z", "--out", "-", "-"]
    code, out, err = run(argv, stdin=build(FixtureSpec.of("xmp=mismatched")))
    assert code == 0 and out.startswith(b"%PDF-1.4") and "<stdin> -> <stdout>" in err
    assert run(argv, stdin=build(FixtureSpec.of("xmp=mismatched")))[1] == out


def test_convert_needs_profile(files):
    code, _, err = run(["convert", files("n.pdf", "output-intent=absent")])
    assert code == 3 and "--icc" in err


def test_convert_level_a_untagged(files):
    code, _, err = run(["convert", "--level", "a1a", files("u.pdf")])
    assert code == 1 and "unfixable" in err


def test_inspect(files):
    code, out, _ = run(["inspect", "--format", "json", files("i.pdf", "sound-annot", "lzw-filter")])
    d = json.loads(out)
    assert code == 0
    assert d["pages"] == 1 and d["features"][0]["kind"] == "SoundAnnot"
    assert d["filters"] == ["FlateDecode", "LZWDecode"] and d["metadata"] == "present"
    code, out, _ = run(["inspect", files("j.pdf")])
    assert b"metadata: present" in out


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "pdfa1", "validate", files("m.pdf")], capture_output=True)
    assert proc.returncode == 0 and proc.stdout.startswith(b"CONFORMANT")
