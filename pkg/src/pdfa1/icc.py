"""ICC profile headers and the catalog's output intents."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from .cos.objects import Name, ObjectId, PdfString, Ref, Stream
from .errors import BadMagic, IccError, PdfError, TooShort

HEADER_SIZE = 128
MAGIC = b"acsp"
PDFA_INTENT = "GTS_PDFA1"

# colour-space signature -> number of components
COMPONENTS = {b"GRAY": 1, b"RGB ": 3, b"CMYK": 4, b"Lab ": 3, b"XYZ ": 3}


@dataclass(frozen=True)
class IccHeader:
    profile_size: int
    profile_class: bytes
    color_space: bytes
    magic: bytes
    version: tuple[int, int]

    @property
    def components(self) -> int | None:
        return COMPONENTS.get(self.color_space)


def parse_icc_header(data: bytes) -> IccHeader:
    data = bytes(data)
    if len(data) < HEADER_SIZE:
        raise TooShort(f"{len(data)} bytes; an ICC header needs {HEADER_SIZE}")
    magic = data[36:40]
    if magic != MAGIC:
        raise BadMagic(magic)
    (size,) = struct.unpack_from(">I", data, 0)
    if size < HEADER_SIZE:
        raise TooShort(f"declared profile size {size} is smaller than the header")
    if size > len(data):
        raise TooShort(f"declared profile size {size} exceeds the {len(data)} bytes present")
    return IccHeader(
        profile_size=size,
        profile_class=data[12:16],
        color_space=data[16:20],
        magic=magic,
        version=(data[8], data[9] >> 4),
    )


@dataclass
class IntentEntry:
    intent: dict
    subtype: str | None
    condition_id: str | None
    header: IccHeader | None
    anomalies: list[str] = field(default_factory=list)
    index: int = 0
    object_id: ObjectId | None = None

    @property
    def location(self) -> str:
        return f"catalog → OutputIntents[{self.index}]"


def _text(value) -> str | None:
    if isinstance(value, PdfString):
        return bytes(value).decode("latin-1")
    return None


def find_output_intents(doc) -> list[IntentEntry]:
    entries: list[IntentEntry] = []
    intents = doc.resolve(doc.catalog.get("OutputIntents"))
    if not isinstance(intents, list):
        return entries
    for index, item in enumerate(intents):
        oid = item.id if isinstance(item, Ref) else None
        intent = doc.resolve(item)
        if not isinstance(intent, dict):
            entries.append(IntentEntry({}, None, None, None, ["intent is not a dictionary"], index, oid))
            continue
        s = doc.resolve(intent.get("S"))
        entry = IntentEntry(
            intent=intent,
            subtype=str(s) if isinstance(s, Name) else None,
            condition_id=_text(doc.resolve(intent.get("OutputConditionIdentifier"))),
            header=None,
            index=index,
            object_id=oid,
        )
        entries.append(entry)
        profile = doc.resolve(intent.get("DestOutputProfile"))
        if profile is None:
            entry.anomalies.append("profile missing")
            continue
        if not isinstance(profile, Stream):
            entry.anomalies.append("DestOutputProfile is not a stream")
            continue
        try:
            entry.header = parse_icc_header(doc.decode(profile))
        except IccError as e:
            entry.anomalies.append(f"bad profile header: {e}")
            continue
        except PdfError as e:
            entry.anomalies.append(f"profile stream undecodable: {e}")
            continue
        n = doc.resolve(profile.dict.get("N"))
        expected = entry.header.components
        if expected is not None and n != expected:
            entry.anomalies.append(
                f"profile N {n} does not match colour space {entry.header.color_space.decode('latin-1').strip()}"
            )
    return entries
