"""Recursive-descent parser from tokens to COS values."""

from __future__ import annotations

import re
from typing import Callable

from ..errors import LengthMismatch, MalformedToken, PdfError, UnbalancedStructure
from . import lexer as lx
from .objects import IndirectObject, ObjectId, Ref, Stream

MAX_DEPTH = 100

_ENDSTREAM = re.compile(rb"endstream")
_ENDSTREAM_AT = re.compile(rb"(?:\r\n|\r|\n)?[\x00\t\x0c ]*endstream")

LengthResolver = Callable[[Ref], object]


class Parser:
    """Parse values out of ``data``.

    ``lenient`` turns recoverable stream-framing defects into ``notes``
    instead of exceptions. ``length_resolver`` resolves an indirect
    stream ``/Length``.
    """

    def __init__(self, data: bytes, pos: int = 0, *, lenient: bool = False,
                 length_resolver: LengthResolver | None = None):
        self.lexer = lx.Lexer(data, pos)
        self.data = data
        self.lenient = lenient
        self.length_resolver = length_resolver
        self.notes: list[str] = []

    @property
    def pos(self) -> int:
        return self.lexer.pos

    @pos.setter
    def pos(self, value: int) -> None:
        self.lexer.pos = value

    def _next(self):
        tok = self.lexer.next()
        if tok is None:
            raise UnbalancedStructure(len(self.data), "unexpected end of data")
        return tok

    def parse_value(self, depth: int = 0):
        if depth > MAX_DEPTH:
            raise UnbalancedStructure(self.pos, "nesting too deep")
        tok = self._next()
        kind = tok.kind
        if kind == lx.INTEGER:
            # look ahead for "num gen R"
            save = self.pos
            t2 = self.lexer.next()
            if t2 is not None and t2.kind == lx.INTEGER:
                t3 = self.lexer.next()
                if t3 is not None and t3.kind == lx.KEYWORD and t3.value == b"R":
                    if tok.value < 1 or not 0 <= t2.value <= 65535:
                        raise MalformedToken(tok.start, "invalid object reference")
                    return Ref(tok.value, t2.value)
            self.pos = save
            return tok.value
        if kind in (lx.REAL, lx.NAME, lx.STRING):
            return tok.value
        if kind == lx.ARRAY_OPEN:
            items = []
            while True:
                save = self.pos
                t = self._next()
                if t.kind == lx.ARRAY_CLOSE:
                    return items
                self.pos = save
                items.append(self.parse_value(depth + 1))
        if kind == lx.DICT_OPEN:
            result: dict = {}
            while True:
                t = self._next()
                if t.kind == lx.DICT_CLOSE:
                    return result
                if t.kind != lx.NAME:
                    raise UnbalancedStructure(t.start, "dictionary key is not a name")
                result[t.value] = self.parse_value(depth + 1)
        if kind == lx.KEYWORD:
            if tok.value == b"true":
                return True
            if tok.value == b"false":
                return False
            if tok.value == b"null":
                return None
            raise UnbalancedStructure(tok.start, f"unexpected keyword {tok.value[:20]!r}")
        raise UnbalancedStructure(tok.start, f"unexpected {kind!r}")

    def parse_indirect(self) -> IndirectObject:
        """Parse ``num gen obj <value> [stream ... endstream] endobj``."""
        start = self.pos
        t1, t2, t3 = self._next(), self._next(), self._next()
        if not (t1.kind == lx.INTEGER and t2.kind == lx.INTEGER
                and t3.kind == lx.KEYWORD and t3.value == b"obj"):
            raise UnbalancedStructure(t1.start, "expected 'N G obj'")
        if t1.value < 1 or not 0 <= t2.value <= 65535:
            raise MalformedToken(t1.start, "invalid object number")
        oid = ObjectId(t1.value, t2.value)
        value = self.parse_value()
        save = self.pos
        t = self.lexer.next()
        if t is not None and t.kind == lx.KEYWORD and t.value == b"stream":
            if not isinstance(value, dict):
                raise UnbalancedStructure(t.start, "stream keyword after non-dictionary")
            value = self._stream_body(value, t.end)
            save = self.pos
            t = self.lexer.next()
        if t is None or t.kind != lx.KEYWORD or t.value != b"endobj":
            if not self.lenient:
                raise UnbalancedStructure(start, f"object {oid} lacks endobj")
            self.notes.append(f"object {oid}: missing endobj")
            self.pos = save
        return IndirectObject(oid, value)

    def _stream_body(self, sdict: dict, after_keyword: int) -> Stream:
        data = self.data
        begin = after_keyword
        if data[begin:begin + 2] == b"\r\n":
            begin += 2
        elif data[begin:begin + 1] == b"\n":
            begin += 1
        elif data[begin:begin + 1] == b"\r":
            begin += 1
            if not self.lenient:
                raise UnbalancedStructure(after_keyword, "stream keyword followed by bare CR")

        length = sdict.get("Length")
        if isinstance(length, Ref) and self.length_resolver is not None:
            try:
                length = self.length_resolver(length)
            except PdfError:
                length = None

        declared = length if isinstance(length, int) and not isinstance(length, bool) else None
        if declared is not None and 0 <= declared <= len(data) - begin:
            end = begin + declared
            m = _ENDSTREAM_AT.match(data, end)
            if m:
                self.pos = m.end()
                return Stream(sdict, data[begin:end], begin)

        # Length missing, indirect and unresolvable, or wrong: find endstream.
        m = _ENDSTREAM.search(data, begin)
        if m is None:
            raise UnbalancedStructure(begin, "stream without endstream")
        end = m.start()
        if data[end - 2:end] == b"\r\n" and end - 2 >= begin:
            end -= 2
        elif data[end - 1:end] in (b"\n", b"\r") and end - 1 >= begin:
            end -= 1
        actual = end - begin
        if declared is None:
            if not self.lenient:
                raise LengthMismatch(-1, actual)
            self.notes.append(f"stream at {begin}: Length unusable, recovered {actual} bytes by scanning")
        else:
            if not self.lenient:
                raise LengthMismatch(declared, actual)
            self.notes.append(f"stream at {begin}: Length {declared} disagrees with data ({actual})")
        self.pos = m.end()
        return Stream(sdict, data[begin:end], begin)


def parse_object(data: bytes, offset: int = 0, *, lenient: bool = False,
                 length_resolver: LengthResolver | None = None):
    """Parse one object at ``offset``.

    An ``N G obj ... endobj`` wrapper yields an :class:`IndirectObject`
    carrying the id; anything else yields the bare value.
    """
    p = Parser(data, offset, lenient=lenient, length_resolver=length_resolver)
    save = p.pos
    t1 = p.lexer.next()
    if t1 is not None and t1.kind == lx.INTEGER:
        t2 = p.lexer.next()
        t3 = p.lexer.next() if t2 is not None else None
        if (t2 is not None and t2.kind == lx.INTEGER and t3 is not None
                and t3.kind == lx.KEYWORD and t3.value == b"obj"):
            p.pos = save
            return p.parse_indirect()
    p.pos = save
    return p.parse_value()

