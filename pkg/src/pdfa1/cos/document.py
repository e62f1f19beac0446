"""File-level structure: header, cross-reference chain, trailer, objects."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import (
    BrokenXref,
    MissingTrailer,
    NotAPdf,
    PdfError,
    ResolutionCycle,
    XrefCycle,
    XrefError,
    XrefOutOfBounds,
    XrefStreamUnsupported,
)
from . import lexer as lx
from .objects import IndirectObject, ObjectId, Ref
from .parser import Parser

HEADER_WINDOW = 1024
TAIL_WINDOW = 1024
MAX_RESOLVE_DEPTH = 32

_HEADER = re.compile(rb"%PDF-(\d+)\.(\d+)")
_STARTXREF = re.compile(rb"startxref\s+(\d+)")
_XREF_SECTION = re.compile(rb"[\x00\t\x0c\r\n ]*(\d+)[\x00\t\x0c ]+(\d+)[\x00\t\x0c ]*(?:\r\n|\r|\n)")
_XREF_ENTRY = re.compile(rb"[\x00\t\x0c\r\n ]*(\d{1,10})[\x00\t\x0c ]+(\d{1,5})[\x00\t\x0c ]+([nf])")
_OBJ_HEADER = re.compile(rb"(\d+)[\x00\t\x0c\r\n ]+(\d+)[\x00\t\x0c\r\n ]+obj\b")
_SCAN_OBJ = re.compile(rb"(?<![0-9])(\d{1,10})[\x00\t\x0c\r\n ]+(\d{1,5})[\x00\t\x0c\r\n ]+obj\b")


@dataclass(frozen=True)
class XrefEntry:
    offset: int
    in_use: bool


@dataclass
class XrefTable:
    entries: dict[ObjectId, XrefEntry] = field(default_factory=dict)
    previous: int | None = None
    sections: int = 1

    def __len__(self):
        return len(self.entries)


@dataclass
class PdfFile:
    version: tuple[int, int]
    xref: XrefTable
    trailer: dict
    data: bytes
    objects: dict[ObjectId, object]
    has_encrypt: bool = False
    revisions: int = 1
    notes: list[str] = field(default_factory=list)
    recovered: bool = False

    def get(self, oid) -> object:
        return self.objects.get(ObjectId(oid[0], oid[1]))

    def resolve(self, value, max_depth: int = MAX_RESOLVE_DEPTH):
        return resolve(self, value, max_depth)


def resolve(file: PdfFile, value, max_depth: int = MAX_RESOLVE_DEPTH):
    """Follow references until a direct value; absent objects give ``None``."""
    seen: list[ObjectId] = []
    while isinstance(value, Ref):
        oid = value.id
        if oid in seen or len(seen) >= max_depth:
            raise ResolutionCycle(seen + [oid])
        seen.append(oid)
        value = file.objects.get(oid)
    return value


def _read_xref_section(data: bytes, offset: int) -> tuple[XrefTable, dict]:
    """Parse one ``xref ... trailer << >>`` section at ``offset``."""
    if not 0 <= offset < len(data):
        raise XrefOutOfBounds(f"xref offset {offset} outside file of {len(data)} bytes")
    pos = offset
    while pos < len(data) and data[pos] in lx.WHITESPACE:
        pos += 1
    if not data.startswith(b"xref", pos):
        if _OBJ_HEADER.match(data, pos):
            raise XrefStreamUnsupported(f"cross-reference stream at {offset} (PDF 1.5+)")
        raise MissingTrailer(f"no xref keyword at offset {offset}")
    pos += 4
    table = XrefTable()
    size = len(data)
    while True:
        m = _XREF_SECTION.match(data, pos)
        if not m:
            break
        first, count = int(m.group(1)), int(m.group(2))
        pos = m.end()
        for i in range(count):
            e = _XREF_ENTRY.match(data, pos)
            if not e:
                raise MissingTrailer(f"truncated xref subsection at {pos}")
            pos = e.end()
            num = first + i
            off, gen, kind = int(e.group(1)), int(e.group(2)), e.group(3)
            if num == 0:
                continue
            in_use = kind == b"n"
            if in_use and not 0 <= off < size:
                raise XrefOutOfBounds(f"object {num} {gen} at offset {off} beyond end of file")
            table.entries[ObjectId(num, gen)] = XrefEntry(off, in_use)
    lexer = lx.Lexer(data, pos)
    tok = lexer.next()
    if tok is None or tok.kind != lx.KEYWORD or tok.value != b"trailer":
        raise MissingTrailer(f"xref section at {offset} is not followed by a trailer")
    parser = Parser(data, lexer.pos)
    trailer = parser.parse_value()
    if not isinstance(trailer, dict):
        raise MissingTrailer("trailer is not a dictionary")
    prev = trailer.get("Prev")
    if prev is not None:
        if isinstance(prev, bool) or not isinstance(prev, int):
            raise MissingTrailer("trailer Prev is not an integer")
        table.previous = prev
    return table, trailer


def parse_xref_chain(data: bytes, startxref: int) -> tuple[XrefTable, dict]:
    """Merge the Prev-linked xref sections; the newest entry per object wins."""
    merged = XrefTable()
    seen_numbers: set[int] = set()
    visited: set[int] = set()
    newest_trailer = None
    offset: int | None = startxref
    while offset is not None:
        if offset in visited:
            raise XrefCycle(f"xref chain revisits offset {offset}")
        visited.add(offset)
        table, trailer = _read_xref_section(data, offset)
        if newest_trailer is None:
            newest_trailer = trailer
        added = set()
        for oid, entry in table.entries.items():
            if oid.num not in seen_numbers:
                merged.entries[oid] = entry
                added.add(oid.num)
        seen_numbers |= added
        offset = table.previous
    merged.sections = len(visited)
    return merged, newest_trailer


def _header_version(data: bytes) -> tuple[tuple[int, int], int]:
    idx = data.find(b"%PDF-", 0, HEADER_WINDOW + 5)
    if idx < 0:
        raise NotAPdf("no %PDF- header in the first 1024 bytes")
    m = _HEADER.match(data, idx)
    if not m or len(m.group(1)) > 2 or len(m.group(2)) > 2:
        raise NotAPdf("unreadable version in %PDF- header")
    return (int(m.group(1)), int(m.group(2))), idx


def _find_startxref(data: bytes) -> int:
    tail_start = max(0, len(data) - TAIL_WINDOW)
    idx = data.rfind(b"startxref", tail_start)
    if idx < 0:
        raise BrokenXref("no startxref in the last 1024 bytes")
    m = _STARTXREF.match(data, idx)
    if not m:
        raise BrokenXref("startxref is not followed by an offset")
    return int(m.group(1))


class _Loader:
    """Parses objects at xref offsets on demand (indirect Length needs it)."""

    def __init__(self, data: bytes, offsets: dict[ObjectId, int]):
        self.data = data
        self.offsets = offsets
        self.objects: dict[ObjectId, object] = {}
        self.failed: dict[ObjectId, str] = {}
        self.notes: list[str] = []
        self._busy: set[ObjectId] = set()

    def load(self, oid: ObjectId):
        if oid in self.objects:
            return self.objects[oid]
        if oid in self.failed or oid in self._busy or oid not in self.offsets:
            return None
        self._busy.add(oid)
        try:
            parser = Parser(self.data, self.offsets[oid], lenient=True,
                            length_resolver=self._length)
            obj = parser.parse_indirect()
            self.notes.extend(parser.notes)
            if obj.id != oid:
                raise XrefError(f"xref says {oid}, file has {obj.id}")
            self.objects[oid] = obj.value
            return obj.value
        except PdfError as e:
            self.failed[oid] = str(e)
            return None
        finally:
            self._busy.discard(oid)

    def _length(self, ref: Ref):
        value = self.load(ref.id)
        if isinstance(value, Ref):
            value = self.load(value.id)
        return value


def _verify_offsets(data: bytes, xref: XrefTable) -> list[str]:
    problems = []
    for oid, entry in xref.entries.items():
        if not entry.in_use:
            continue
        m = _OBJ_HEADER.match(data, entry.offset)
        if not m or (int(m.group(1)), int(m.group(2))) != (oid.num, oid.gen):
            problems.append(f"xref offset {entry.offset} for object {oid} does not hold it")
    return problems


def _recover(data: bytes) -> tuple[XrefTable, dict, dict[ObjectId, object], list[str]]:
    """Rebuild an object table by scanning for ``N G obj`` headers."""
    offsets: dict[int, tuple[ObjectId, int]] = {}
    for m in _SCAN_OBJ.finditer(data):
        num, gen = int(m.group(1)), int(m.group(2))
        if num < 1 or gen > 65535:
            continue
        offsets[num] = (ObjectId(num, gen), m.start())
    table = XrefTable({oid: XrefEntry(off, True) for oid, off in offsets.values()})
    loader = _Loader(data, {oid: off for oid, off in offsets.values()})
    for oid in table.entries:
        loader.load(oid)
    objects = loader.objects
    notes = list(loader.notes)

    trailer = None
    for m in reversed(list(re.finditer(rb"trailer", data))):
        try:
            candidate = Parser(data, m.end()).parse_value()
        except PdfError:
            continue
        if isinstance(candidate, dict) and isinstance(candidate.get("Root"), Ref) \
                and candidate["Root"].id in objects:
            trailer = candidate
            break
    if trailer is None:
        for oid in sorted(objects):
            value = objects[oid]
            if isinstance(value, dict) and value.get("Type") == "Catalog":
                trailer = {"Root": Ref(*oid)}
        if trailer is None:
            raise BrokenXref("recovery scan found no document catalog")
        notes.append("trailer rebuilt from the catalog object")
    trailer = {k: v for k, v in trailer.items() if k != "Prev"}
    return table, trailer, objects, notes


def open_file(data: bytes) -> PdfFile:
    """Open a PDF from its complete bytes.

    When the cross-reference data is unusable the body is scanned for
    object headers instead, and the repair is recorded in ``notes``.
    """
    data = bytes(data)
    version, _ = _header_version(data)
    notes: list[str] = []
    try:
        startxref = _find_startxref(data)
        xref, trailer = parse_xref_chain(data, startxref)
        revisions = xref.sections
        problems = _verify_offsets(data, xref)
        if problems:
            raise BrokenXref(problems[0] + (f" (and {len(problems) - 1} more)" if len(problems) > 1 else ""))
        loader = _Loader(data, {oid: e.offset for oid, e in xref.entries.items() if e.in_use})
        for oid in loader.offsets:
            loader.load(oid)
        objects = loader.objects
        notes.extend(loader.notes)
        for oid, reason in sorted(loader.failed.items()):
            notes.append(f"object {oid} unreadable: {reason}")
        recovered = False
        if not isinstance(resolve_quiet(objects, trailer.get("Root")), dict):
            raise BrokenXref("trailer Root does not resolve to a dictionary")
    except XrefStreamUnsupported:
        raise
    except PdfError as e:
        notes.append(f"cross-reference data unusable ({e}); rebuilt by scanning the file")
        xref, trailer, objects, more = _recover(data)
        notes.extend(more)
        revisions = 1
        recovered = True
        if not isinstance(resolve_quiet(objects, trailer.get("Root")), dict):
            raise BrokenXref("recovered trailer Root does not resolve to a dictionary") from None
    return PdfFile(
        version=version,
        xref=xref,
        trailer=trailer,
        data=data,
        objects=objects,
        has_encrypt="Encrypt" in trailer,
        revisions=revisions,
        notes=notes,
        recovered=recovered,
    )


def resolve_quiet(objects: dict, value, max_depth: int = MAX_RESOLVE_DEPTH):
    seen = 0
    while isinstance(value, Ref):
        seen += 1
        if seen > max_depth:
            return None
        value = objects.get(value.id)
    return value


__all__ = [
    "IndirectObject",
    "PdfFile",
    "XrefEntry",
    "XrefTable",
    "open_file",
    "parse_xref_chain",
    "resolve",
]
