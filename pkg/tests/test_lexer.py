from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdfa1.cos import lexer as lx
from pdfa1.cos.lexer import Lexer, lex_tokens
from pdfa1.cos.objects import Name, PdfString
from pdfa1.errors import MalformedToken
from pdfa1.writer import format_name, format_string


def kinds(data: bytes):
    return [(t.kind, t.value) for t in lex_tokens(data)]


def test_basic_tokens():
    toks = kinds(b"<< /Type /Page /Count 3 /Scale -1.5 >> [true null] R")
    assert toks == [
        ("<<", None), (lx.NAME, "Type"), (lx.NAME, "Page"), (lx.NAME, "Count"),
        (lx.INTEGER, 3), (lx.NAME, "Scale"), (lx.REAL, -1.5), (">>", None),
        ("[", None), (lx.KEYWORD, b"true"), (lx.KEYWORD, b"null"), ("]", None), (lx.KEYWORD, b"R"),
    ]


@pytest.mark.parametrize("src, value", [
    (rb"(a\nb)", b"a\nb"),
    (rb"(nested (parens) ok)", b"nested (parens) ok"),
    (rb"(\101\60\0)", b"A0\x00"),
    (b"(line\\\ncontinued)", b"linecontinued"),
    (b"(cr\rlf)", b"cr\nlf"),
    (b"<48656C6C6F>", b"Hello"),
    (b"<4 8 6>", b"\x48\x60"),
])
def test_strings(src, value):
    (tok,) = list(lex_tokens(src))
    assert tok.kind == lx.STRING
    assert bytes(tok.value) == value


def test_name_escapes():
    (tok,) = list(lex_tokens(b"/A#20B"))
    assert tok.value == Name("A B")
    (tok,) = list(lex_tokens(b"/lone#"))
    assert tok.value == "lone#"


def test_comments_skipped():
    assert kinds(b"% a comment\n42 % trailing\n") == [(lx.INTEGER, 42)]


@pytest.mark.parametrize("src", [
    b"(unterminated",
    b"<4G>",
    b"<414",
    b"/" + b"x" * 128,
    b"99999999999999999999",
    b")",
])
def test_malformed(src):
    with pytest.raises(MalformedToken):
        list(lex_tokens(src))


def test_lexer_rejects_start_outside_data():
    with pytest.raises(MalformedToken):
        Lexer(b"abc", 10)


@given(st.binary(min_size=1, max_size=40).filter(lambda b: len(format_name(Name.from_bytes(b))) <= 128))
def test_name_roundtrip(raw):
    name = Name.from_bytes(raw)
    (tok,) = list(lex_tokens(format_name(name)))
    assert tok.value == name
    # a written name never contains raw whitespace or delimiters
    body = format_name(name)[1:]
    assert not set(body) & set(lx.WHITESPACE + lx.DELIMITERS.replace(b"/", b"") + b"/")


@given(st.binary(max_size=200), st.booleans())
def test_string_roundtrip(raw, hex_form):
    (tok,) = list(lex_tokens(format_string(PdfString(raw, hex_form=hex_form))))
    assert bytes(tok.value) == raw


@given(st.integers(min_value=-(2**63), max_value=2**63 - 1))
def test_integer_roundtrip(n):
    (tok,) = list(lex_tokens(b"%d" % n))
    assert tok.value == n


@given(st.binary(max_size=300))
def test_lexer_only_raises_structured_errors(data):
    try:
        for _ in lex_tokens(data):
            pass
    except MalformedToken:
        pass
