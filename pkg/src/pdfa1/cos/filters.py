"""Stream filters of PDF 1.4.

Decoding covers the general-purpose filters. Image codecs are passed
through as :class:`OpaqueBytes` because validation never needs pixels.
"""

from __future__ import annotations

import base64
import binascii
import zlib

from ..errors import CorruptStreamData, UnknownFilter
from .objects import Name, Stream

# Refuse to inflate past this; keeps hostile inputs bounded.
MAX_DECODED_SIZE = 64 * 1024 * 1024

FILTER_ALIASES = {
    "Fl": "FlateDecode",
    "AHx": "ASCIIHexDecode",
    "A85": "ASCII85Decode",
    "LZW": "LZWDecode",
    "RL": "RunLengthDecode",
    "DCT": "DCTDecode",
    "CCF": "CCITTFaxDecode",
}

OPAQUE_FILTERS = frozenset({"DCTDecode", "CCITTFaxDecode", "JBIG2Decode", "JPXDecode"})


class OpaqueBytes(bytes):
    """Bytes left encoded by an image-only filter, named in ``filter``."""

    def __new__(cls, value: bytes, filter: str):
        self = super().__new__(cls, value)
        self.filter = filter
        return self


def canonical_filter(name) -> str:
    return FILTER_ALIASES.get(str(name), str(name))


def filter_chain(stream: Stream, resolve=lambda v: v) -> list[tuple[str, dict | None]]:
    """Return ``[(filter name, decode parms), ...]`` in application order."""
    filters = resolve(stream.dict.get("Filter"))
    parms = resolve(stream.dict.get("DecodeParms"))
    if filters is None:
        return []
    if isinstance(filters, Name):
        filters = [filters]
        parms = [parms]
    if not isinstance(filters, list):
        raise CorruptStreamData("Filter", "Filter is neither a name nor an array")
    if not isinstance(parms, list):
        parms = [parms] * len(filters) if isinstance(parms, dict) and len(filters) == 1 else [None] * len(filters)
    chain = []
    for i, f in enumerate(filters):
        f = resolve(f)
        if not isinstance(f, Name):
            raise CorruptStreamData("Filter", "filter entry is not a name")
        p = resolve(parms[i]) if i < len(parms) else None
        chain.append((canonical_filter(f), p if isinstance(p, dict) else None))
    return chain


def decode_stream(stream: Stream, resolver=None) -> bytes:
    """Apply the stream's filter chain to its raw bytes.

    ``resolver`` maps a possibly-indirect value to a direct one; it is
    needed when Filter or DecodeParms are indirect. Stops at the first
    image-only filter and returns what it has as :class:`OpaqueBytes`.
    """
    resolve = resolver or (lambda v: v)
    data = stream.raw
    for name, parms in filter_chain(stream, resolve):
        if name in OPAQUE_FILTERS:
            return OpaqueBytes(data, name)
        decoder = _DECODERS.get(name)
        if decoder is None:
            raise UnknownFilter(name)
        data = decoder(data, {k: resolve(v) for k, v in (parms or {}).items()})
    return data


# -- individual decoders --------------------------------------------------

def flate_decode(data: bytes, parms: dict | None = None) -> bytes:
    d = zlib.decompressobj()
    try:
        out = d.decompress(data, MAX_DECODED_SIZE)
    except zlib.error as e:
        raise CorruptStreamData("FlateDecode", str(e)) from None
    if d.unconsumed_tail:
        raise CorruptStreamData("FlateDecode", "decoded size exceeds limit")
    # a missing Adler-32 trailer is tolerated, as most readers do
    return apply_predictor(out, parms or {}, "FlateDecode")


def lzw_decode(data: bytes, parms: dict | None = None) -> bytes:
    early = 1 if _int_param(parms or {}, "EarlyChange", 1) else 0
    out = bytearray()
    table = _lzw_table()
    width = 9
    prev: bytes | None = None
    bitbuf = 0
    nbits = 0
    for byte in data:
        bitbuf = (bitbuf << 8) | byte
        nbits += 8
        while nbits >= width:
            nbits -= width
            code = (bitbuf >> nbits) & ((1 << width) - 1)
            bitbuf &= (1 << nbits) - 1
            if code == 256:
                table = _lzw_table()
                prev = None
            elif code == 257:
                return apply_predictor(bytes(out), parms or {}, "LZWDecode")
            else:
                if code < len(table):
                    entry = table[code]
                    if prev is not None and len(table) < 4096:
                        table.append(prev + entry[:1])
                elif code == len(table) and prev is not None:
                    entry = prev + prev[:1]
                    table.append(entry)
                else:
                    raise CorruptStreamData("LZWDecode", f"invalid code {code}")
                out += entry
                if len(out) > MAX_DECODED_SIZE:
                    raise CorruptStreamData("LZWDecode", "decoded size exceeds limit")
                prev = entry
            width = min(12, (len(table) + early).bit_length())
    return apply_predictor(bytes(out), parms or {}, "LZWDecode")


def _lzw_table() -> list[bytes]:
    # entries 256/257 are the clear and EOD codes and never looked up
    return [bytes([i]) for i in range(256)] + [b"", b""]


def ascii_hex_decode(data: bytes, parms: dict | None = None) -> bytes:
    end = data.find(b">")
    if end >= 0:
        data = data[:end]
    body = bytes(b for b in data if b not in b"\x00\t\n\x0c\r ")
    if len(body) % 2:
        body += b"0"
    try:
        return binascii.unhexlify(body)
    except (binascii.Error, ValueError) as e:
        raise CorruptStreamData("ASCIIHexDecode", str(e)) from None


def ascii85_decode(data: bytes, parms: dict | None = None) -> bytes:
    body = bytes(b for b in data if b not in b"\x00\t\n\x0c\r ")
    if body.startswith(b"<~"):
        body = body[2:]
    end = body.find(b"~>")
    if end >= 0:
        body = body[:end]
    elif body.endswith(b"~"):
        body = body[:-1]
    if len(body.replace(b"z", b"")) % 5 == 1:
        raise CorruptStreamData("ASCII85Decode", "final group has a single character")
    try:
        return base64.a85decode(body)
    except ValueError as e:
        raise CorruptStreamData("ASCII85Decode", str(e)) from None


def run_length_decode(data: bytes, parms: dict | None = None) -> bytes:
    out = bytearray()
    i = 0
    n = len(data)
    while i < n:
        length = data[i]
        if length == 128:
            break
        if length < 128:
            chunk = data[i + 1:i + 2 + length]
            if len(chunk) < length + 1:
                raise CorruptStreamData("RunLengthDecode", "truncated literal run")
            out += chunk
            i += 2 + length
        else:
            if i + 1 >= n:
                raise CorruptStreamData("RunLengthDecode", "truncated repeat run")
            out += data[i + 1:i + 2] * (257 - length)
            i += 2
        if len(out) > MAX_DECODED_SIZE:
            raise CorruptStreamData("RunLengthDecode", "decoded size exceeds limit")
    return bytes(out)


_DECODERS = {
    "FlateDecode": flate_decode,
    "LZWDecode": lzw_decode,
    "ASCIIHexDecode": ascii_hex_decode,
    "ASCII85Decode": ascii85_decode,
    "RunLengthDecode": run_length_decode,
}


# -- predictors -----------------------------------------------------------

def _int_param(parms: dict, key: str, default: int) -> int:
    v = parms.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        return default
    return v


def apply_predictor(data: bytes, parms: dict, filter_name: str) -> bytes:
    predictor = _int_param(parms, "Predictor", 1)
    if predictor == 1:
        return data
    colors = _int_param(parms, "Colors", 1)
    bpc = _int_param(parms, "BitsPerComponent", 8)
    columns = _int_param(parms, "Columns", 1)
    if not (1 <= colors <= 32 and bpc in (1, 2, 4, 8, 16) and 1 <= columns <= 1 << 20):
        raise CorruptStreamData(filter_name, "invalid predictor parameters")
    bpp = max(1, colors * bpc // 8)
    rowlen = (colors * bpc * columns + 7) // 8
    if predictor == 2:
        return _tiff_predictor(data, colors, bpc, rowlen, filter_name)
    if 10 <= predictor <= 15:
        return _png_predictor(data, bpp, rowlen, filter_name)
    raise CorruptStreamData(filter_name, f"unsupported predictor {predictor}")


def _tiff_predictor(data: bytes, colors: int, bpc: int, rowlen: int, filter_name: str) -> bytes:
    if bpc not in (8, 16):
        raise CorruptStreamData(filter_name, f"TIFF predictor with {bpc} bits per component")
    out = bytearray(data)
    step = colors * (bpc // 8)
    for start in range(0, len(out) - len(out) % rowlen, rowlen):
        if bpc == 8:
            for i in range(start + step, start + rowlen):
                out[i] = (out[i] + out[i - step]) & 0xFF
        else:
            for i in range(start + step, start + rowlen - 1, 2):
                v = (int.from_bytes(out[i:i + 2], "big") + int.from_bytes(out[i - step:i - step + 2], "big")) & 0xFFFF
                out[i:i + 2] = v.to_bytes(2, "big")
    return bytes(out)


def _png_predictor(data: bytes, bpp: int, rowlen: int, filter_name: str) -> bytes:
    out = bytearray()
    prev = bytearray(rowlen)
    stride = rowlen + 1
    for start in range(0, len(data), stride):
        kind = data[start]
        row = bytearray(data[start + 1:start + stride])
        if len(row) < rowlen:
            row.extend(bytes(rowlen - len(row)))
        if kind == 0:
            pass
        elif kind == 1:
            for i in range(bpp, rowlen):
                row[i] = (row[i] + row[i - bpp]) & 0xFF
        elif kind == 2:
            for i in range(rowlen):
                row[i] = (row[i] + prev[i]) & 0xFF
        elif kind == 3:
            for i in range(rowlen):
                left = row[i - bpp] if i >= bpp else 0
                row[i] = (row[i] + ((left + prev[i]) >> 1)) & 0xFF
        elif kind == 4:
            for i in range(rowlen):
                a = row[i - bpp] if i >= bpp else 0
                b = prev[i]
                c = prev[i - bpp] if i >= bpp else 0
                p = a + b - c
                pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
                if pa <= pb and pa <= pc:
                    pred = a
                elif pb <= pc:
                    pred = b
                else:
                    pred = c
                row[i] = (row[i] + pred) & 0xFF
        else:
            raise CorruptStreamData(filter_name, f"bad PNG row filter type {kind}")
        out += row
        prev = row
    return bytes(out)


# -- encoders (used by the writer and the fixture builder) ----------------

def flate_encode(data: bytes) -> bytes:
    return zlib.compress(data, 9)


def ascii_hex_encode(data: bytes) -> bytes:
    return binascii.hexlify(data).upper() + b">"


def ascii85_encode(data: bytes) -> bytes:
    return base64.a85encode(data) + b"~>"


def lzw_encode(data: bytes) -> bytes:
    """LZW with EarlyChange 1, framed by a clear code and EOD."""
    codes: list[tuple[int, int]] = []
    table = {bytes([i]): i for i in range(256)}
    next_code = 258
    codes.append((256, 9))
    w = b""
    for byte in data:
        wc = w + bytes([byte])
        if wc in table:
            w = wc
            continue
        codes.append((table[w], min(12, next_code.bit_length())))
        table[wc] = next_code
        next_code += 1
        if next_code >= 4000:
            codes.append((256, min(12, next_code.bit_length())))
            table = {bytes([i]): i for i in range(256)}
            next_code = 258
        w = bytes([byte])
    if w:
        codes.append((table[w], min(12, next_code.bit_length())))
        next_code += 1
    codes.append((257, min(12, next_code.bit_length())))

    out = bytearray()
    bits = nbits = 0
    for code, width in codes:
        bits = (bits << width) | code
        nbits += width
        while nbits >= 8:
            nbits -= 8
            out.append((bits >> nbits) & 0xFF)
        bits &= (1 << nbits) - 1
    if nbits:
        out.append((bits << (8 - nbits)) & 0xFF)
    return bytes(out)
