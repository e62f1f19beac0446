"""Text strings: UTF-16BE with a byte-order mark, else PDFDocEncoding."""

from __future__ import annotations

from .errors import PdfError


class UndecodableText(PdfError):
    pass


# PDFDocEncoding differs from Latin-1 in 0x18-0x1F and 0x80-0xA0.
_PDFDOC_DIFFS = {
    0x18: "˘", 0x19: "ˇ", 0x1A: "ˆ", 0x1B: "˙",
    0x1C: "˝", 0x1D: "˛", 0x1E: "˚", 0x1F: "˜",
    0x80: "•", 0x81: "†", 0x82: "‡", 0x83: "…",
    0x84: "\u2014", 0x85: "–", 0x86: "ƒ", 0x87: "⁄",
    0x88: "‹", 0x89: "›", 0x8A: "−", 0x8B: "‰",
    0x8C: "„", 0x8D: "“", 0x8E: "”", 0x8F: "‘",
    0x90: "’", 0x91: "‚", 0x92: "™", 0x93: "ﬁ",
    0x94: "ﬂ", 0x95: "Ł", 0x96: "Œ", 0x97: "Š",
    0x98: "Ÿ", 0x99: "Ž", 0x9A: "ı", 0x9B: "ł",
    0x9C: "œ", 0x9D: "š", 0x9E: "ž", 0xA0: "€",
}
_UNDEFINED = frozenset(
    [b for b in range(0x00, 0x18) if b not in (0x09, 0x0A, 0x0D)] + [0x7F, 0x9F, 0xAD]
)

PDFDOC_DECODE: dict[int, str] = {}
for _b in range(256):
    if _b not in _UNDEFINED:
        PDFDOC_DECODE[_b] = _PDFDOC_DIFFS.get(_b, chr(_b))
PDFDOC_ENCODE = {ch: b for b, ch in PDFDOC_DECODE.items()}


def decode_text(raw: bytes) -> str:
    if raw[:2] == b"\xfe\xff":
        try:
            return bytes(raw[2:]).decode("utf-16-be")
        except UnicodeDecodeError as e:
            raise UndecodableText(f"invalid UTF-16BE text: {e.reason}") from None
    try:
        return "".join(PDFDOC_DECODE[b] for b in raw)
    except KeyError as e:
        raise UndecodableText(f"byte 0x{e.args[0]:02X} undefined in PDFDocEncoding") from None


def encode_text(text: str) -> bytes:
    """PDFDocEncoding when it can represent ``text``, else UTF-16BE + BOM."""
    try:
        return bytes(PDFDOC_ENCODE[ch] for ch in text)
    except KeyError:
        return b"\xfe\xff" + text.encode("utf-16-be")
