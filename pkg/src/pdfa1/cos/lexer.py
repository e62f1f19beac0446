"""Byte-level tokenizer for PDF 1.4 syntax."""

from __future__ import annotations

import re
from typing import Iterator

from ..errors import MalformedToken
from .objects import Name, PdfString, Token

WHITESPACE = b"\x00\t\n\x0c\r "
DELIMITERS = b"()<>[]{}/%"

# PDF implementation limits for PDF 1.4 (Appendix C of the reference).
MAX_NAME_LENGTH = 127
INT_MIN, INT_MAX = -(2**63), 2**63 - 1

_SKIP = re.compile(rb"(?:[\x00\t\n\x0c\r ]+|%[^\r\n]*)+")
_REGULAR = re.compile(rb"[^\x00\t\n\x0c\r ()<>\[\]{}/%]+")
_NUMBER = re.compile(rb"[+-]?(?:\d+\.?\d*|\.\d+)\Z")
_HEXDIGITS = frozenset(b"0123456789abcdefABCDEF")

# token kinds
INTEGER = "integer"
REAL = "real"
NAME = "name"
STRING = "string"
ARRAY_OPEN = "["
ARRAY_CLOSE = "]"
DICT_OPEN = "<<"
DICT_CLOSE = ">>"
BRACE_OPEN = "{"
BRACE_CLOSE = "}"
KEYWORD = "keyword"

_ESCAPES = {
    ord("n"): b"\n", ord("r"): b"\r", ord("t"): b"\t", ord("b"): b"\b",
    ord("f"): b"\f", ord("("): b"(", ord(")"): b")", ord("\\"): b"\\",
}


class Lexer:
    """Pull tokenizer over an immutable byte buffer.

    ``pos`` may be read and assigned freely; the parser relies on this for
    look-ahead.
    """

    def __init__(self, data: bytes, pos: int = 0):
        if not 0 <= pos <= len(data):
            raise MalformedToken(pos, "start offset outside data")
        self.data = data
        self.pos = pos

    def skip_whitespace(self) -> None:
        m = _SKIP.match(self.data, self.pos)
        if m:
            self.pos = m.end()

    def next(self) -> Token | None:
        self.skip_whitespace()
        data, pos = self.data, self.pos
        if pos >= len(data):
            return None
        c = data[pos]
        if c == 0x2F:  # /
            return self._name(pos)
        if c == 0x28:  # (
            return self._literal_string(pos)
        if c == 0x3C:  # <
            if data[pos + 1:pos + 2] == b"<":
                self.pos = pos + 2
                return Token(DICT_OPEN, None, pos, pos + 2)
            return self._hex_string(pos)
        if c == 0x3E:  # >
            if data[pos + 1:pos + 2] == b">":
                self.pos = pos + 2
                return Token(DICT_CLOSE, None, pos, pos + 2)
            raise MalformedToken(pos, "stray '>'")
        if c in b"[]{}":
            self.pos = pos + 1
            return Token(chr(c), None, pos, pos + 1)
        if c == 0x29:  # )
            raise MalformedToken(pos, "unbalanced ')'")
        m = _REGULAR.match(data, pos)
        self.pos = end = m.end()
        text = m.group()
        if _NUMBER.match(text):
            if b"." in text:
                return Token(REAL, float(text), pos, end)
            value = int(text)
            if not INT_MIN <= value <= INT_MAX:
                raise MalformedToken(pos, "integer out of 64-bit range")
            return Token(INTEGER, value, pos, end)
        return Token(KEYWORD, text, pos, end)

    def _name(self, start: int) -> Token:
        m = _REGULAR.match(self.data, start + 1)
        raw = m.group() if m else b""
        end = start + 1 + len(raw)
        if len(raw) > MAX_NAME_LENGTH:
            raise MalformedToken(start, "over-long name")
        if b"#" in raw:
            raw = _unescape_name(raw)
        self.pos = end
        return Token(NAME, Name.from_bytes(raw), start, end)

    def _literal_string(self, start: int) -> Token:
        data = self.data
        n = len(data)
        i = start + 1
        depth = 1
        out = bytearray()
        while i < n:
            c = data[i]
            if c == 0x5C:  # backslash
                i += 1
                if i >= n:
                    break
                c = data[i]
                if c in _ESCAPES:
                    out += _ESCAPES[c]
                    i += 1
                elif 0x30 <= c <= 0x37:
                    j = i
                    while j < n and j < i + 3 and 0x30 <= data[j] <= 0x37:
                        j += 1
                    out.append(int(data[i:j], 8) & 0xFF)
                    i = j
                elif c == 0x0D:  # line continuation
                    i += 2 if data[i + 1:i + 2] == b"\n" else 1
                elif c == 0x0A:
                    i += 1
                else:
                    out.append(c)
                    i += 1
            elif c == 0x28:
                depth += 1
                out.append(c)
                i += 1
            elif c == 0x29:
                depth -= 1
                if depth == 0:
                    self.pos = i + 1
                    return Token(STRING, PdfString(bytes(out)), start, i + 1)
                out.append(c)
                i += 1
            elif c == 0x0D:
                # any end-of-line marker inside a string reads as LF
                out.append(0x0A)
                i += 2 if data[i + 1:i + 2] == b"\n" else 1
            else:
                out.append(c)
                i += 1
        raise MalformedToken(start, "unterminated literal string")

    def _hex_string(self, start: int) -> Token:
        end = self.data.find(b">", start + 1)
        if end < 0:
            raise MalformedToken(start, "unterminated hex string")
        body = bytes(b for b in self.data[start + 1:end] if b not in WHITESPACE)
        for b in body:
            if b not in _HEXDIGITS:
                raise MalformedToken(start, f"bad hex digit {chr(b)!r} in hex string")
        if len(body) % 2:
            body += b"0"
        self.pos = end + 1
        return Token(STRING, PdfString(bytes.fromhex(body.decode("ascii")), hex_form=True), start, end + 1)


def _unescape_name(raw: bytes) -> bytes:
    out = bytearray()
    i = 0
    n = len(raw)
    while i < n:
        c = raw[i]
        if c == 0x23 and i + 2 < n and raw[i + 1] in _HEXDIGITS and raw[i + 2] in _HEXDIGITS:
            out.append(int(raw[i + 1:i + 3], 16))
            i += 3
        else:
            # a lone '#' is kept literally, as PDF 1.1 producers wrote
            out.append(c)
            i += 1
    return bytes(out)


def lex_tokens(data: bytes, start: int = 0) -> Iterator[Token]:
    """Yield every token from ``start`` to the end of ``data``."""
    lexer = Lexer(data, start)
    while True:
        tok = lexer.next()
        if tok is None:
            return
        yield tok
