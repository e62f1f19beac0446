"""Full-rewrite serializer producing a single-revision PDF 1.4 file."""

from __future__ import annotations

import hashlib
from decimal import Decimal

from .cos.filters import decode_stream, filter_chain, flate_encode
from .cos.objects import Name, ObjectId, PdfString, Ref, Stream
from .errors import DanglingReference, PdfError

# Filter chains the writer decodes and re-compresses as plain FlateDecode.
# Anything else (LZW, image codecs) is copied verbatim so a rewrite never
# changes which filters a file uses.
REENCODABLE = frozenset({"FlateDecode", "ASCIIHexDecode", "ASCII85Decode"})

_NAME_SAFE = frozenset(range(0x21, 0x7F)) - frozenset(b"()<>[]{}/%#")
_STRING_ESCAPES = {0x28: b"\\(", 0x29: b"\\)", 0x5C: b"\\\\", 0x0D: b"\\r"}

HEADER = b"%PDF-1.4\n%\xe2\xe3\xcf\xd3\n"


def format_name(name: str) -> bytes:
    out = bytearray(b"/")
    for b in Name(name).raw:
        if b in _NAME_SAFE:
            out.append(b)
        else:
            out += b"#%02X" % b
    return bytes(out)


def format_string(s: bytes) -> bytes:
    if getattr(s, "hex_form", False):
        return b"<" + bytes(s).hex().upper().encode() + b">"
    out = bytearray(b"(")
    for b in s:
        esc = _STRING_ESCAPES.get(b)
        if esc:
            out += esc
        else:
            out.append(b)
    out.append(0x29)
    return bytes(out)


def format_real(x: float) -> bytes:
    if x != x or x in (float("inf"), float("-inf")):
        return b"0"
    text = format(Decimal(repr(x)), "f")
    if "." not in text:
        text += ".0"
    return text.encode()


def format_value(value) -> bytes:
    if value is None:
        return b"null"
    if value is True:
        return b"true"
    if value is False:
        return b"false"
    if isinstance(value, Ref):
        return b"%d %d R" % (value.num, value.gen)
    if isinstance(value, int):
        return b"%d" % value
    if isinstance(value, float):
        return format_real(value)
    if isinstance(value, Name):
        return format_name(value)
    if isinstance(value, (PdfString, bytes)):
        return format_string(value)
    if isinstance(value, list):
        return b"[" + b" ".join(format_value(v) for v in value) + b"]"
    if isinstance(value, dict):
        parts = [format_name(k) + b" " + format_value(v) for k, v in value.items()]
        return b"<<" + b" ".join(parts) + b">>"
    raise TypeError(f"cannot serialize {type(value).__name__} as a COS value")


def _reencode(stream: Stream, resolve) -> tuple[dict, bytes]:
    sdict = dict(stream.dict)
    try:
        chain = filter_chain(stream, resolve)
    except PdfError:
        chain = None
    external = "F" in sdict
    if chain and not external and all(name in REENCODABLE for name, _ in chain):
        try:
            data = decode_stream(stream, resolve)
        except PdfError:
            data = None
        if data is not None:
            sdict.pop("DecodeParms", None)
            sdict[Name("Filter")] = Name("FlateDecode")
            raw = flate_encode(data)
            sdict[Name("Length")] = len(raw)
            return sdict, raw
    sdict[Name("Length")] = len(stream.raw)
    return sdict, stream.raw


def _references(value, out: list) -> None:
    stack = [value]
    while stack:
        v = stack.pop()
        if isinstance(v, Ref):
            out.append(v.id)
        elif isinstance(v, list):
            stack.extend(reversed(v))
        elif isinstance(v, dict):
            stack.extend(reversed(list(v.values())))
        elif isinstance(v, Stream):
            stack.extend(reversed(list(v.dict.values())))


def reachable(objects: dict, trailer: dict) -> list[ObjectId]:
    """Object ids reachable from the trailer; raises on a dangling ref."""
    pending: list = []
    _references({k: v for k, v in trailer.items() if k not in ("ID", "Prev", "Size")}, pending)
    seen: set[ObjectId] = set()
    while pending:
        oid = pending.pop()
        if oid in seen:
            continue
        if oid not in objects:
            raise DanglingReference(oid)
        seen.add(oid)
        found: list = []
        _references(objects[oid], found)
        pending.extend(reversed(found))
    return sorted(seen)


def serialize(objects: dict, trailer: dict) -> bytes:
    """Write every object reachable from ``trailer`` into a fresh file.

    Object ids are preserved; gaps become free entries. Trailer keys other
    than Root, Info and Encrypt are dropped, and the ID is recomputed from
    the body unless the file is encrypted (its key depends on the ID).
    """
    ids = reachable(objects, trailer)

    def resolve(v, _depth=0):
        while isinstance(v, Ref) and _depth < 32:
            v = objects.get(v.id)
            _depth += 1
        return v

    body = bytearray(HEADER)
    offsets: dict[int, tuple[int, int]] = {}
    for oid in ids:
        offsets[oid.num] = (len(body), oid.gen)
        value = objects[oid]
        body += b"%d %d obj\n" % (oid.num, oid.gen)
        if isinstance(value, Stream):
            sdict, raw = _reencode(value, resolve)
            body += format_value(sdict) + b"\nstream\n" + raw + b"\nendstream"
        else:
            body += format_value(value)
        body += b"\nendobj\n"

    size = (max(offsets) if offsets else 0) + 1
    xref_offset = len(body)
    free = [n for n in range(1, size) if n not in offsets]
    lines = [b"xref\n", b"0 %d\n" % size]
    # free list: 0 -> first free -> ... -> 0
    next_free = dict(zip([0] + free, free + [0]))
    lines.append(b"%010d 65535 f \n" % next_free[0])
    for n in range(1, size):
        if n in offsets:
            off, gen = offsets[n]
            lines.append(b"%010d %05d n \n" % (off, gen))
        else:
            lines.append(b"%010d 00000 f \n" % next_free[n])

    new_trailer: dict = {Name("Size"): size}
    for key in ("Root", "Info", "Encrypt"):
        if key in trailer:
            new_trailer[Name(key)] = trailer[key]
    if "Encrypt" in trailer and isinstance(trailer.get("ID"), list):
        new_trailer[Name("ID")] = trailer["ID"]
    else:
        digest = hashlib.md5(bytes(body)).digest()
        new_trailer[Name("ID")] = [PdfString(digest, hex_form=True), PdfString(digest, hex_form=True)]

    out = body + b"".join(lines)
    out += b"trailer\n" + format_value(new_trailer) + b"\nstartxref\n%d\n%%%%EOF\n" % xref_offset
    return bytes(out)
