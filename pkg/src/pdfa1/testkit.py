"""Synthetic PDF fixtures, one toggle per rule condition.

Fixtures are emitted from byte templates here rather than through
:mod:`pdfa1.writer`, so the parser and serializer are tested against an
independent producer. Every output is deterministic.

Toggles (``FixtureSpec.of("sound-annot", "xmp=absent", ...)``):

fonts (at most one)
    ``embedded-font`` (default) Type1 with a FontFile program;
    ``truetype-font`` TrueType with FontFile2; ``composite-font`` Type0
    over a CIDFontType2; ``type3-font``; ``missing-font-file`` TrueType
    whose descriptor has no FontFile2; ``no-font-descriptor``;
    ``empty-font-file``; ``no-font`` (no text at all).
``font-in-form``
    the font is used from a Form XObject instead of the page.
annotations and actions
    ``sound-annot``, ``movie-annot``, ``screen-annot``, ``uri-action``
    (a Link annotation); ``sound-action``, ``movie-action``,
    ``launch-action``, ``remote-goto``, ``javascript-action`` (chained
    from the catalog OpenAction through Next).
self-containment
    ``external-stream`` (image whose data lives in a file named by /F),
    ``embedded-file`` (Names EmbeddedFiles).
metadata
    ``xmp=consistent|mismatched|absent|malformed|no-pdfaid|one-sided|not-stream``,
    ``pdfaid=A``, ``bad-date``.
colour
    ``output-intent=valid|missing-profile|bad-profile|absent|extra-bad``,
    ``no-device-color``.
structure
    ``tagged``, ``tagged=unmarked``, ``tagged=no-struct-tree``,
    ``nested-pages``.
file level
    ``version=M.m``, ``encrypt``, ``jpx-filter``, ``lzw-filter``,
    ``incremental-update`` (a second revision retitles the document),
    ``shadowed-encrypt`` (Encrypt only in the first revision),
    ``broken-xref`` (every xref offset shifted).
"""

from __future__ import annotations

import random
import struct
import zlib
from dataclasses import dataclass

from .cos.filters import lzw_encode
from .errors import InconsistentSpec

FONT_TOGGLES = (
    "embedded-font", "truetype-font", "composite-font", "type3-font",
    "missing-font-file", "no-font-descriptor", "empty-font-file", "no-font",
)
FLAGS = frozenset(FONT_TOGGLES) | {
    "font-in-form", "sound-annot", "movie-annot", "screen-annot", "uri-action",
    "sound-action", "movie-action", "launch-action", "remote-goto", "javascript-action",
    "external-stream", "embedded-file", "bad-date", "no-device-color", "tagged",
    "nested-pages", "encrypt", "jpx-filter", "lzw-filter", "incremental-update",
    "shadowed-encrypt", "broken-xref",
}
VALUED = {
    "xmp": {"consistent", "mismatched", "absent", "malformed", "no-pdfaid", "one-sided", "not-stream"},
    "output-intent": {"valid", "missing-profile", "bad-profile", "absent", "extra-bad"},
    "pdfaid": {"A", "B"},
    "tagged": {"marked", "unmarked", "no-struct-tree"},
}
ACTION_TOGGLES = ("sound-action", "movie-action", "launch-action", "remote-goto", "javascript-action")

TITLE = "Report"
AUTHOR = "R. V."
PRODUCER = "pdfa1 testkit"
CREATION_DATE = "D:20070417120000Z"
CREATION_DATE_XMP = "2007-04-17T12:00:00Z"
KEYWORDS = "archive"


@dataclass(frozen=True)
class FixtureSpec:
    toggles: frozenset = frozenset()

    @classmethod
    def of(cls, *toggles: str) -> "FixtureSpec":
        return cls(frozenset(toggles))

    def options(self) -> dict:
        """Validate the toggles and return them as a flat option map."""
        opts: dict = {}
        for t in sorted(self.toggles):
            key, eq, value = t.partition("=")
            if eq:
                if key == "version":
                    parts = value.split(".")
                    if len(parts) != 2 or not all(p.isdigit() and len(p) <= 2 for p in parts):
                        raise InconsistentSpec(f"bad version toggle {t!r}")
                elif key not in VALUED or value not in VALUED[key]:
                    raise InconsistentSpec(f"unknown toggle {t!r}")
            elif key not in FLAGS:
                raise InconsistentSpec(f"unknown toggle {t!r}")
            else:
                value = True
            if key in opts:
                raise InconsistentSpec(f"toggle {key!r} given twice")
            opts[key] = value
        fonts = [t for t in FONT_TOGGLES if t in opts]
        if len(fonts) > 1:
            raise InconsistentSpec(f"font toggles are mutually exclusive: {', '.join(fonts)}")
        if "shadowed-encrypt" in opts and "incremental-update" not in opts:
            raise InconsistentSpec("shadowed-encrypt needs incremental-update")
        if "shadowed-encrypt" in opts and "encrypt" in opts:
            raise InconsistentSpec("encrypt and shadowed-encrypt are mutually exclusive")
        if "font-in-form" in opts and "no-font" in opts:
            raise InconsistentSpec("font-in-form needs a font")
        if opts.get("tagged") is True:
            opts["tagged"] = "marked"
        opts["font"] = fonts[0] if fonts else "embedded-font"
        return opts

    @property
    def name(self) -> str:
        return "+".join(sorted(self.toggles)) or "golden"


# -- embedded resources -----------------------------------------------------

def _s15(x: float) -> bytes:
    return struct.pack(">i", round(x * 65536))


def _xyz(x, y, z) -> bytes:
    return b"XYZ " + bytes(4) + _s15(x) + _s15(y) + _s15(z)


def make_icc_profile() -> bytes:
    """A version 2 RGB display profile: D50 white point, sRGB-like primaries
    and a 2.2 gamma curve."""
    desc_text = b"pdfa1 test RGB\x00"
    desc = (b"desc" + bytes(4) + struct.pack(">I", len(desc_text)) + desc_text
            + struct.pack(">II", 0, 0) + struct.pack(">HB", 0, 0) + bytes(67))
    cprt = b"text" + bytes(4) + b"No copyright, test data\x00"
    curve = b"curv" + bytes(4) + struct.pack(">IH", 1, 0x0233)
    tags = [
        (b"desc", desc),
        (b"cprt", cprt),
        (b"wtpt", _xyz(0.9642, 1.0, 0.8249)),
        (b"rXYZ", _xyz(0.4361, 0.2225, 0.0139)),
        (b"gXYZ", _xyz(0.3851, 0.7169, 0.0971)),
        (b"bXYZ", _xyz(0.1431, 0.0606, 0.7141)),
        (b"rTRC", curve),
        (b"gTRC", curve),
        (b"bTRC", curve),
    ]
    table_size = 4 + 12 * len(tags)
    offset = 128 + table_size
    directory = struct.pack(">I", len(tags))
    data = b""
    for sig, body in tags:
        directory += sig + struct.pack(">II", offset + len(data), len(body))
        data += body + bytes(-len(body) % 4)
    size = 128 + table_size + len(data)
    header = (
        struct.pack(">I", size) + bytes(4)            # size, preferred CMM
        + bytes([2, 0x10, 0, 0])                      # version 2.1
        + b"mntr" + b"RGB " + b"XYZ "
        + struct.pack(">6H", 2007, 4, 17, 12, 0, 0)
        + b"acsp" + bytes(4) + bytes(4)               # magic, platform, flags
        + bytes(4) + bytes(4) + bytes(8)              # manufacturer, model, attributes
        + struct.pack(">I", 0)                        # rendering intent
        + _s15(0.9642) + _s15(1.0) + _s15(0.8249)     # illuminant
        + bytes(4) + bytes(16) + bytes(28)            # creator, id, reserved
    )
    assert len(header) == 128
    return header + directory + data


def _charstring_encrypt(plain: bytes, r: int, n: int = 4) -> bytes:
    out = bytearray()
    for b in bytes(n) + plain:
        c = b ^ (r >> 8)
        out.append(c)
        r = ((c + r) * 52845 + 22719) & 0xFFFF
    return bytes(out)


def make_type1_font() -> tuple[bytes, int, int, int]:
    """Minimal Type 1 program (.notdef and space, both blank).

    Returns (program, Length1, Length2, Length3).
    """
    clear = (
        b"%!PS-AdobeFont-1.0: Minimal 001.000\n"
        b"12 dict begin\n"
        b"/FontInfo 1 dict dup begin /version (001.000) readonly def end readonly def\n"
        b"/FontName /Minimal def\n"
        b"/Encoding StandardEncoding def\n"
        b"/PaintType 0 def\n"
        b"/FontType 1 def\n"
        b"/FontMatrix [0.001 0 0 0.001 0 0] readonly def\n"
        b"/FontBBox {0 0 500 700} readonly def\n"
        b"currentdict end\n"
        b"currentfile eexec\n"
    )
    # "0 500 hsbw endchar"
    glyph = _charstring_encrypt(bytes([139, 248, 136, 13, 14]), 4330)
    private = (
        b"dup /Private 8 dict dup begin\n"
        b"/RD {string currentfile exch readstring pop} executeonly def\n"
        b"/ND {noaccess def} executeonly def\n"
        b"/NP {noaccess put} executeonly def\n"
        b"/BlueValues [] ND\n"
        b"/MinFeature {16 16} ND\n"
        b"/lenIV 4 def\n"
        b"/password 5839 def\n"
        b"/Subrs 0 array ND\n"
        b"2 index /CharStrings 2 dict dup begin\n"
        + b"/.notdef %d RD " % len(glyph) + glyph + b" ND\n"
        + b"/space %d RD " % len(glyph) + glyph + b" ND\n"
        b"end\nend\nreadonly put\nnoaccess put\n"
        b"dup /FontName get exch definefont pop\n"
        b"mark currentfile closefile\n"
    )
    binary = _charstring_encrypt(private, 55665)
    trailer = (b"0" * 64 + b"\n") * 8 + b"cleartomark\n"
    return clear + binary + trailer, len(clear), len(binary), len(trailer)


def _checksum(data: bytes) -> int:
    data += bytes(-len(data) % 4)
    return sum(struct.unpack(f">{len(data) // 4}I", data)) & 0xFFFFFFFF


def make_truetype_font() -> bytes:
    """Smallest sfnt we emit: one empty glyph, no cmap."""
    head = struct.pack(
        ">IIIIHHqqhhhhHHhhh",
        0x00010000, 0x00010000, 0, 0x5F0F3CF5, 0, 1000,
        0, 0, 0, 0, 500, 700, 0, 8, 2, 0, 0,
    )
    hhea = struct.pack(">IhhhHhhhhhhhhhhhH", 0x00010000, 700, 0, 0, 500, 0, 0, 500,
                       1, 0, 0, 0, 0, 0, 0, 0, 1)
    maxp = struct.pack(">IH", 0x00005000, 1)
    hmtx = struct.pack(">Hh", 500, 0)
    loca = struct.pack(">HH", 0, 0)
    glyf = b""
    tables = sorted({
        b"glyf": glyf, b"head": head, b"hhea": hhea, b"hmtx": hmtx,
        b"loca": loca, b"maxp": maxp,
    }.items())
    n = len(tables)
    entry_selector = n.bit_length() - 1
    search_range = (1 << entry_selector) * 16
    out = struct.pack(">IHHHH", 0x00010000, n, search_range, entry_selector, n * 16 - search_range)
    offset = 12 + 16 * n
    body = b""
    for tag, data in tables:
        out += tag + struct.pack(">III", _checksum(data), offset + len(body), len(data))
        body += data + bytes(-len(data) % 4)
    font = bytearray(out + body)
    # head.checkSumAdjustment
    head_offset = offset + sum(len(d) + (-len(d) % 4) for t, d in tables if t < b"head")
    adjust = (0xB1B0AFBA - _checksum(bytes(font))) & 0xFFFFFFFF
    font[head_offset + 8:head_offset + 12] = struct.pack(">I", adjust)
    return bytes(font)


# -- PDF emission -----------------------------------------------------------

def pdf_string(text: str) -> bytes:
    raw = text.encode("latin-1")
    return b"(" + raw.replace(b"\\", b"\\\\").replace(b"(", b"\\(").replace(b")", b"\\)") + b")"


def stream(dict_body: bytes, data: bytes) -> bytes:
    return b"<< " + dict_body + b" /Length %d >>\nstream\n" % len(data) + data + b"\nendstream"


def flate(dict_body: bytes, data: bytes) -> bytes:
    return stream(dict_body + b" /Filter /FlateDecode", zlib.compress(data, 9))


def xmp_packet(props: dict[str, str], pdfaid: tuple[str, str] | None) -> bytes:
    """Hand-assembled XMP; ``props`` keys are info keys."""
    parts = []
    if "Title" in props:
        parts.append(f'<dc:title><rdf:Alt><rdf:li xml:lang="x-default">{props["Title"]}</rdf:li></rdf:Alt></dc:title>')
    if "Author" in props:
        parts.append(f"<dc:creator><rdf:Seq><rdf:li>{props['Author']}</rdf:li></rdf:Seq></dc:creator>")
    if "Subject" in props:
        parts.append(f'<dc:description><rdf:Alt><rdf:li xml:lang="x-default">{props["Subject"]}</rdf:li></rdf:Alt></dc:description>')
    simple = {"Keywords": "pdf:Keywords", "Producer": "pdf:Producer", "Creator": "xmp:CreatorTool",
              "CreationDate": "xmp:CreateDate", "ModDate": "xmp:ModifyDate"}
    for key, tag in simple.items():
        if key in props:
            parts.append(f"<{tag}>{props[key]}</{tag}>")
    if pdfaid:
        parts.append(f"<pdfaid:part>{pdfaid[0]}</pdfaid:part>")
        parts.append(f"<pdfaid:conformance>{pdfaid[1]}</pdfaid:conformance>")
    body = "\n".join("   " + p for p in parts)
    text = (
        '<?xpacket begin="\ufeff" id="W5M0MpCehiHzreSzNTczkc9d"?>\n'
        '<x:xmpmeta xmlns:x="adobe:ns:meta/">\n'
        ' <rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#">\n'
        '  <rdf:Description rdf:about=""\n'
        '    xmlns:dc="http://purl.org/dc/elements/1.1/"\n'
        '    xmlns:pdf="http://ns.adobe.com/pdf/1.3/"\n'
        '    xmlns:xmp="http://ns.adobe.com/xap/1.0/"\n'
        '    xmlns:pdfaid="http://www.aiim.org/pdfa/ns/id/">\n'
        f"{body}\n"
        "  </rdf:Description>\n"
        " </rdf:RDF>\n"
        "</x:xmpmeta>\n"
        '<?xpacket end="w"?>\n'
    )
    return text.encode("utf-8")


def _emit(version: bytes, objects: dict[int, bytes], trailer: bytes,
          shift: int = 0) -> tuple[bytearray, dict[int, int]]:
    out = bytearray(b"%PDF-" + version + b"\n%\xe2\xe3\xcf\xd3\n")
    offsets = {}
    for num in sorted(objects):
        offsets[num] = len(out)
        out += b"%d 0 obj\n" % num + objects[num] + b"\nendobj\n"
    xref_at = len(out)
    size = max(objects) + 1
    out += b"xref\n0 %d\n0000000000 65535 f \n" % size
    for num in range(1, size):
        if num in offsets:
            out += b"%010d 00000 n \n" % (offsets[num] + shift)
        else:
            out += b"0000000000 00000 f \n"
    out += b"trailer\n<< /Size %d " % size + trailer + b" >>\nstartxref\n%d\n%%%%EOF\n" % xref_at
    return out, {"xref": xref_at}


def _append_update(base: bytes, prev_xref: int, objects: dict[int, bytes], trailer: bytes, size: int) -> bytes:
    out = bytearray(base)
    offsets = {}
    for num in sorted(objects):
        offsets[num] = len(out)
        out += b"%d 0 obj\n" % num + objects[num] + b"\nendobj\n"
    xref_at = len(out)
    out += b"xref\n"
    for num in sorted(offsets):
        out += b"%d 1\n%010d 00000 n \n" % (num, offsets[num])
    out += (b"trailer\n<< /Size %d " % size + trailer + b" /Prev %d >>\n" % prev_xref
            + b"startxref\n%d\n%%%%EOF\n" % xref_at)
    return bytes(out)


def build(spec: FixtureSpec | None = None) -> bytes:
    """Emit the fixture described by ``spec`` (default: the golden file)."""
    opts = (spec or FixtureSpec()).options()
    objs: dict[int, bytes] = {}
    next_num = [12]

    def new(body: bytes) -> int:
        num = next_num[0]
        next_num[0] += 1
        objs[num] = body
        return num

    catalog_extra = []
    page_extra = []
    resources_extra = []
    annots = []
    content_ops = []

    # fonts
    font = opts["font"]
    font_resource = None
    if font != "no-font":
        font_resource = b"<< /F1 5 0 R >>"
        descriptor = (b"<< /Type /FontDescriptor /FontName /Minimal /Flags 32 "
                      b"/FontBBox [0 0 500 700] /ItalicAngle 0 /Ascent 700 /Descent 0 "
                      b"/CapHeight 700 /StemV 80")
        if font in ("embedded-font", "no-font-descriptor"):
            program, l1, l2, l3 = make_type1_font()
            objs[5] = (b"<< /Type /Font /Subtype /Type1 /BaseFont /Minimal /FirstChar 32 "
                       b"/LastChar 32 /Widths [500]"
                       + (b"" if font == "no-font-descriptor" else b" /FontDescriptor 6 0 R") + b" >>")
            if font == "embedded-font":
                objs[6] = descriptor + b" /FontFile 9 0 R >>"
                objs[9] = flate(b"/Length1 %d /Length2 %d /Length3 %d" % (l1, l2, l3), program)
        elif font == "empty-font-file":
            objs[5] = (b"<< /Type /Font /Subtype /Type1 /BaseFont /Minimal /FirstChar 32 "
                       b"/LastChar 32 /Widths [500] /FontDescriptor 6 0 R >>")
            objs[6] = descriptor + b" /FontFile 9 0 R >>"
            objs[9] = stream(b"/Length1 0 /Length2 0 /Length3 0", b"")
        elif font in ("truetype-font", "missing-font-file"):
            objs[5] = (b"<< /Type /Font /Subtype /TrueType /BaseFont /Minimal /FirstChar 32 "
                       b"/LastChar 32 /Widths [500] /FontDescriptor 6 0 R >>")
            if font == "truetype-font":
                ttf = make_truetype_font()
                objs[6] = descriptor + b" /FontFile2 9 0 R >>"
                objs[9] = flate(b"/Length1 %d" % len(ttf), ttf)
            else:
                objs[6] = descriptor + b" >>"
        elif font == "composite-font":
            ttf = make_truetype_font()
            cid = new(b"<< /Type /Font /Subtype /CIDFontType2 /BaseFont /Minimal "
                      b"/CIDSystemInfo << /Registry (Adobe) /Ordering (Identity) /Supplement 0 >> "
                      b"/FontDescriptor 6 0 R /DW 500 /CIDToGIDMap /Identity >>")
            objs[5] = (b"<< /Type /Font /Subtype /Type0 /BaseFont /Minimal /Encoding /Identity-H "
                       b"/DescendantFonts [%d 0 R] >>" % cid)
            objs[6] = descriptor + b" /FontFile2 9 0 R >>"
            objs[9] = flate(b"/Length1 %d" % len(ttf), ttf)
        elif font == "type3-font":
            glyph = new(flate(b"", b"500 0 0 0 500 700 d1\n0 0 500 700 re f\n"))
            objs[5] = (b"<< /Type /Font /Subtype /Type3 /FontBBox [0 0 500 700] "
                       b"/FontMatrix [0.001 0 0 0.001 0 0] /CharProcs << /square %d 0 R >> "
                       b"/Encoding << /Type /Encoding /Differences [32 /square] >> "
                       b"/FirstChar 32 /LastChar 32 /Widths [500] /Resources << >> >>" % glyph)
        text = b"BT /F1 12 Tf 72 720 Td (Report ) Tj ET"
        if "font-in-form" in opts:
            form = new(flate(b"/Type /XObject /Subtype /Form /BBox [0 0 612 792] "
                             b"/Resources << /Font " + font_resource + b" >>", text + b"\n"))
            resources_extra.append(b"/XObject << /Fm1 %d 0 R >>" % form)
            content_ops.append(b"/Fm1 Do")
            font_resource = None
        else:
            content_ops.append(text)
    if "no-device-color" not in opts:
        content_ops.insert(0, b"0 0 0 rg")

    # images
    xobjects = []
    if "external-stream" in opts:
        img = new(b"<< /Type /XObject /Subtype /Image /Width 1 /Height 1 /ColorSpace /DeviceGray "
                  b"/BitsPerComponent 8 /F (image.raw) /Length 0 >>\nstream\n\nendstream")
        xobjects.append(b"/Im1 %d 0 R" % img)
    if "jpx-filter" in opts:
        img = new(stream(b"/Type /XObject /Subtype /Image /Width 1 /Height 1 /BitsPerComponent 8 "
                         b"/Filter /JPXDecode", b"\x00\x00\x00\x0cjP  \r\n\x87\n"))
        xobjects.append(b"/Im2 %d 0 R" % img)
    if xobjects:
        resources_extra.append(b"/XObject << " + b" ".join(xobjects) + b" >>")
        if "font-in-form" in opts:
            resources_extra = [r for r in resources_extra if not r.startswith(b"/XObject")]
            resources_extra.append(b"/XObject << /Fm1 %d 0 R " % form + b" ".join(xobjects) + b" >>")

    # annotations
    rect = b"/Rect [72 72 144 144]"
    if "sound-annot" in opts:
        snd = new(stream(b"/Type /Sound /R 8000 /C 1 /B 8 /E /Raw", bytes(16)))
        annots.append(b"<< /Type /Annot /Subtype /Sound " + rect + b" /Sound %d 0 R >>" % snd)
    if "movie-annot" in opts:
        annots.append(b"<< /Type /Annot /Subtype /Movie " + rect + b" /Movie << /F (clip.mov) >> >>")
    if "screen-annot" in opts:
        annots.append(b"<< /Type /Annot /Subtype /Screen " + rect + b" >>")
    if "uri-action" in opts:
        annots.append(b"<< /Type /Annot /Subtype /Link " + rect + b" /Border [0 0 0] "
                      b"/A << /S /URI /URI (http://example.org/) >> >>")
    if annots:
        annot_ids = [new(a) for a in annots]
        page_extra.append(b"/Annots [" + b" ".join(b"%d 0 R" % n for n in annot_ids) + b"]")

    # actions, chained through Next from the OpenAction
    actions = []
    for toggle in ACTION_TOGGLES:
        if toggle not in opts:
            continue
        if toggle == "sound-action":
            snd = new(stream(b"/Type /Sound /R 8000 /C 1 /B 8 /E /Raw", bytes(16)))
            actions.append(b"/S /Sound /Sound %d 0 R" % snd)
        elif toggle == "movie-action":
            actions.append(b"/S /Movie /T (clip)")
        elif toggle == "launch-action":
            actions.append(b"/S /Launch /F (viewer.exe)")
        elif toggle == "remote-goto":
            actions.append(b"/S /GoToR /F (other.pdf) /D [0 /Fit]")
        elif toggle == "javascript-action":
            actions.append(b"/S /JavaScript /JS (app.alert\\(1\\))")
    if actions:
        nxt = None
        for body in reversed(actions):
            tail = b" /Next %d 0 R" % nxt if nxt else b""
            nxt = new(b"<< /Type /Action " + body + tail + b" >>")
        catalog_extra.append(b"/OpenAction %d 0 R" % nxt)

    if "embedded-file" in opts:
        ef = new(flate(b"/Type /EmbeddedFile /Subtype /text#2Fplain", b"attached text\n"))
        spec_id = new(b"<< /Type /Filespec /F (notes.txt) /EF << /F %d 0 R >> >>" % ef)
        catalog_extra.append(b"/Names << /EmbeddedFiles << /Names [(notes.txt) %d 0 R] >> >>" % spec_id)

    tagged = opts.get("tagged")
    if tagged in ("marked", "no-struct-tree"):
        catalog_extra.append(b"/MarkInfo << /Marked true >>")
    elif tagged == "unmarked":
        catalog_extra.append(b"/MarkInfo << /Marked false >>")
    if tagged in ("marked", "unmarked"):
        struct_root = new(b"<< /Type /StructTreeRoot /K [] >>")
        catalog_extra.append(b"/StructTreeRoot %d 0 R" % struct_root)

    # info dictionary and metadata
    info = {"Title": TITLE, "Author": AUTHOR, "Producer": PRODUCER, "CreationDate": CREATION_DATE}
    if "bad-date" in opts:
        info["CreationDate"] = "April 17, 2007"
    xmp_props = dict(info)
    xmp_props["CreationDate"] = CREATION_DATE_XMP if "bad-date" not in opts else info["CreationDate"]
    xmp_mode = opts.get("xmp", "consistent")
    if xmp_mode == "mismatched":
        xmp_props["Title"] = "Draft"
    if xmp_mode == "one-sided":
        info["Keywords"] = KEYWORDS
    if "incremental-update" in opts:
        info_rev1 = dict(info, Title="Draft")
    objs[11] = b"<< " + b" ".join(b"/" + k.encode() + b" " + pdf_string(v) for k, v in info.items()) + b" >>"

    pdfaid = None if xmp_mode == "no-pdfaid" else ("1", opts.get("pdfaid", "B"))
    if xmp_mode in ("consistent", "mismatched", "one-sided", "no-pdfaid"):
        objs[7] = stream(b"/Type /Metadata /Subtype /XML", xmp_packet(xmp_props, pdfaid))
    elif xmp_mode == "malformed":
        objs[7] = stream(b"/Type /Metadata /Subtype /XML", b"<x:xmpmeta><rdf:RDF>unterminated")
    elif xmp_mode == "not-stream":
        objs[7] = b"<< /Type /Metadata /Subtype /XML >>"
    if 7 in objs:
        catalog_extra.append(b"/Metadata 7 0 R")

    # output intents
    oi_mode = opts.get("output-intent", "valid")
    icc = make_icc_profile()
    intent = (b"<< /Type /OutputIntent /S /GTS_PDFA1 /OutputConditionIdentifier (Custom) "
              b"/Info (pdfa1 test RGB)")
    intents = []
    if oi_mode in ("valid", "extra-bad"):
        objs[8] = intent + b" /DestOutputProfile 10 0 R >>"
        objs[10] = flate(b"/N 3", icc)
        intents.append(8)
    if oi_mode == "missing-profile":
        objs[8] = intent + b" >>"
        intents.append(8)
    if oi_mode == "bad-profile":
        objs[8] = intent + b" /DestOutputProfile 10 0 R >>"
        objs[10] = flate(b"/N 3", bytes(128))
        intents.append(8)
    if oi_mode == "extra-bad":
        bad = new(flate(b"/N 3", icc[:100]))
        intents.append(new(intent + b" /DestOutputProfile %d 0 R >>" % bad))
    if intents:
        catalog_extra.append(b"/OutputIntents [" + b" ".join(b"%d 0 R" % n for n in intents) + b"]")

    # page tree
    resources = b"<< "
    if font_resource:
        resources += b"/Font " + font_resource + b" "
    resources += b" ".join(resources_extra) + b" >>"
    content = b"\n".join(content_ops) + b"\n"
    if "lzw-filter" in opts:
        objs[4] = stream(b"/Filter /LZWDecode", lzw_encode(content))
    else:
        objs[4] = flate(b"", content)
    page = (b"/Type /Page /MediaBox [0 0 612 792] /Resources " + resources
            + b" /Contents 4 0 R " + b" ".join(page_extra))
    if "nested-pages" in opts:
        mid = new(b"")  # filled below once the leaf numbers are known
        leaves = [3, new(b""), new(b"")]
        objs[leaves[0]] = b"<< " + page + b" /Parent %d 0 R >>" % mid
        objs[leaves[1]] = b"<< " + page + b" /Parent %d 0 R >>" % mid
        objs[leaves[2]] = b"<< " + page + b" /Parent 2 0 R >>"
        objs[mid] = b"<< /Type /Pages /Parent 2 0 R /Kids [3 0 R %d 0 R] /Count 2 >>" % leaves[1]
        objs[2] = b"<< /Type /Pages /Kids [%d 0 R %d 0 R] /Count 3 >>" % (mid, leaves[2])
    else:
        objs[3] = b"<< " + page + b" /Parent 2 0 R >>"
        objs[2] = b"<< /Type /Pages /Kids [3 0 R] /Count 1 >>"
    objs[1] = b"<< /Type /Catalog /Pages 2 0 R " + b" ".join(catalog_extra) + b" >>"

    version = opts.get("version", "1.4").encode()
    file_id = b"<00112233445566778899AABBCCDDEEFF>"
    trailer = b"/Root 1 0 R /Info 11 0 R /ID [%s %s]" % (file_id, file_id)
    encrypt_dict = (b"<< /Filter /Standard /V 1 /R 2 /Length 40 "
                    b"/O <" + b"00" * 32 + b"> /U <" + b"00" * 32 + b"> /P -4 >>")
    if "encrypt" in opts:
        trailer += b" /Encrypt %d 0 R" % new(encrypt_dict)

    if "incremental-update" in opts:
        final_info = objs[11]
        objs[11] = b"<< " + b" ".join(b"/" + k.encode() + b" " + pdf_string(v) for k, v in info_rev1.items()) + b" >>"
        rev1_trailer = trailer
        if "shadowed-encrypt" in opts:
            rev1_trailer += b" /Encrypt %d 0 R" % new(encrypt_dict)
        base, meta = _emit(version, objs, rev1_trailer)
        return _append_update(bytes(base), meta["xref"], {11: final_info}, trailer, max(objs) + 1)

    out, _ = _emit(version, objs, trailer, shift=7 if "broken-xref" in opts else 0)
    return bytes(out)


# -- corpus -----------------------------------------------------------------

@dataclass(frozen=True)
class RuleCase:
    negative: FixtureSpec
    positive: FixtureSpec
    level: str = "A1b"
    strict: bool = False


def _c(neg, pos=(), level="A1b", strict=False) -> RuleCase:
    return RuleCase(FixtureSpec.of(*neg), FixtureSpec.of(*pos), level, strict)


RULE_CASES: dict[str, RuleCase] = {
    "VER-1": _c(["version=1.7"], ["version=1.3"]),
    "SELF-1": _c(["external-stream"]),
    "SELF-2": _c(["embedded-file"]),
    "SELF-3": _c(["launch-action"]),
    "SELF-4": _c(["remote-goto"]),
    "SELF-5": _c(["uri-action"], strict=True),
    "AV-1": _c(["sound-annot"]),
    "AV-2": _c(["movie-annot"]),
    "AV-3": _c(["screen-annot"]),
    "AV-4": _c(["sound-action"]),
    "AV-5": _c(["movie-action"]),
    "DYN-1": _c(["javascript-action"]),
    "FNT-1": _c(["no-font-descriptor"], ["type3-font"]),
    "FNT-2": _c(["missing-font-file"], ["truetype-font"]),
    "FNT-3": _c(["empty-font-file"], ["composite-font"]),
    "META-1": _c(["xmp=absent"]),
    "META-2": _c(["xmp=malformed"]),
    "META-3": _c(["xmp=mismatched"], ["incremental-update"]),
    "META-4": _c(["xmp=no-pdfaid"]),
    "DATE-1": _c(["bad-date"]),
    "FIL-1": _c(["jpx-filter"]),
    "FIL-2": _c(["lzw-filter"], strict=True),
    "ENC-1": _c(["encrypt"], ["incremental-update", "shadowed-encrypt"]),
    "CLR-1": _c(["output-intent=absent"], ["output-intent=absent", "no-device-color"]),
    "CLR-2": _c(["output-intent=extra-bad"]),
    "TAG-1": _c(["pdfaid=A", "tagged=unmarked"], ["pdfaid=A", "tagged"], level="A1a"),
    "TAG-2": _c(["pdfaid=A", "tagged=no-struct-tree"], ["pdfaid=A", "tagged"], level="A1a"),
}

EXTRA_SPECS = (
    (),
    ("nested-pages",),
    ("font-in-form",),
    ("font-in-form", "truetype-font"),
    ("no-font",),
    ("broken-xref",),
    ("incremental-update",),
    ("xmp=one-sided",),
    ("xmp=not-stream",),
    ("output-intent=missing-profile",),
    ("output-intent=bad-profile",),
    ("xmp=absent", "output-intent=absent"),
    ("xmp=mismatched", "output-intent=bad-profile"),
    ("uri-action",),
    ("sound-annot", "movie-annot", "launch-action", "javascript-action"),
    ("missing-font-file", "xmp=absent"),
    ("lzw-filter", "jpx-filter", "nested-pages"),
    ("tagged", "pdfaid=A", "nested-pages"),
)

# fixtures whose only failures are META-* / CLR-* rules
REMEDIABLE = (
    ("xmp=absent",),
    ("xmp=mismatched",),
    ("xmp=malformed",),
    ("xmp=no-pdfaid",),
    ("xmp=one-sided",),
    ("xmp=not-stream",),
    ("output-intent=absent",),
    ("output-intent=missing-profile",),
    ("output-intent=bad-profile",),
    ("output-intent=extra-bad",),
    ("xmp=absent", "output-intent=absent"),
    ("xmp=mismatched", "output-intent=bad-profile"),
    ("xmp=absent", "output-intent=absent", "nested-pages"),
)


def corpus() -> dict[str, bytes]:
    """Every named fixture: a negative and positive per rule plus extras."""
    out: dict[str, bytes] = {}
    for rule_id, case in RULE_CASES.items():
        out[f"{rule_id.lower()}-negative"] = build(case.negative)
        out[f"{rule_id.lower()}-positive"] = build(case.positive)
    for toggles in EXTRA_SPECS + REMEDIABLE:
        spec = FixtureSpec.of(*toggles)
        out.setdefault(spec.name, build(spec))
    return out


def write_corpus(directory) -> list:
    """Write :func:`corpus` as ``<name>.pdf`` files; returns the paths."""
    from pathlib import Path

    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, data in sorted(corpus().items()):
        path = root / (name.replace("=", "-") + ".pdf")
        path.write_bytes(data)
        paths.append(path)
    return paths


# -- mutation fuzzing -------------------------------------------------------

_TOKENS = (b"obj", b"endobj", b"R", b"<<", b">>", b"[", b"]", b"stream", b"endstream",
           b"xref", b"trailer", b"startxref", b"/Length", b"(", b")", b"<", b">", b"%",
           b"/Type", b"/Kids", b"/Parent", b"0 0 R", b"99999 0 R", b"-1", b"1e400")


def mutate(data: bytes, rng: random.Random, rounds: int | None = None) -> bytes:
    """Apply a few random structural mutations to ``data``."""
    buf = bytearray(data)
    for _ in range(rounds or rng.randint(1, 8)):
        if not buf:
            buf += rng.choice(_TOKENS)
            continue
        op = rng.randrange(8)
        i = rng.randrange(len(buf))
        if op == 0:
            buf[i] ^= 1 << rng.randrange(8)
        elif op == 1:
            buf[i] = rng.randrange(256)
        elif op == 2:
            del buf[i:i + rng.randint(1, 64)]
        elif op == 3:
            buf[i:i] = rng.choice(_TOKENS)
        elif op == 4:
            j = rng.randrange(len(buf))
            buf[i:i] = buf[j:j + rng.randint(1, 256)]
        elif op == 5:
            del buf[rng.randint(len(buf) // 2, len(buf)):]
        elif op == 6:
            # rewrite a digit run; offsets and lengths are where parsers get hurt
            j = i
            while j < len(buf) and 0x30 <= buf[j] <= 0x39:
                j += 1
            buf[i:j] = str(rng.choice([0, 1, -1, 2**31, 2**63, rng.randrange(10**6)])).encode()
        else:
            buf[i:i + 1] = bytes([buf[i]]) * rng.randint(2, 200)
    return bytes(buf[: 50 * 1024])
