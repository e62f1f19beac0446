"""Python representation of COS values.

=============  ==========================================
PDF            Python
=============  ==========================================
null           ``None``
boolean        ``bool``
integer        ``int``
real           ``float``
string         :class:`PdfString` (``bytes`` subclass)
name           :class:`Name` (``str`` subclass, latin-1)
array          ``list``
dictionary     ``dict`` keyed by :class:`Name`
stream         :class:`Stream`
reference      :class:`Ref`
=============  ==========================================

Names are kept as latin-1 text so every byte value maps to exactly one
character; ``Name("Type") == "Type"`` and they hash alike, which keeps
dictionary lookups readable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, NamedTuple, Union


class ObjectId(NamedTuple):
    num: int
    gen: int = 0

    def __str__(self):
        return f"{self.num} {self.gen}"


class Ref(ObjectId):
    """Indirect reference ``num gen R``."""

    @property
    def id(self) -> ObjectId:
        return ObjectId(self.num, self.gen)

    def __repr__(self):
        return f"Ref({self.num}, {self.gen})"


class Name(str):
    __slots__ = ()

    @classmethod
    def from_bytes(cls, raw: bytes) -> "Name":
        return cls(raw.decode("latin-1"))

    @property
    def raw(self) -> bytes:
        return self.encode("latin-1")

    def __repr__(self):
        return "/" + str.__str__(self)


class PdfString(bytes):
    """A string object; bytes are kept undecoded.

    ``hex_form`` records whether the source used ``<...>`` notation so the
    writer can reproduce it. It takes no part in equality.
    """

    def __new__(cls, value: bytes = b"", hex_form: bool = False):
        self = super().__new__(cls, value)
        self.hex_form = hex_form
        return self

    def __repr__(self):
        return f"PdfString({bytes(self)!r}{', hex_form=True' if self.hex_form else ''})"


@dataclass(eq=False)
class Stream:
    dict: dict
    raw: bytes
    offset: int = -1

    def get(self, key, default=None):
        return self.dict.get(key, default)

    def __repr__(self):
        return f"Stream({self.dict!r}, {len(self.raw)} bytes)"


class IndirectObject(NamedTuple):
    id: ObjectId
    value: Any


@dataclass
class Token:
    kind: str
    value: Any
    start: int
    end: int


CosValue = Union[None, bool, int, float, PdfString, Name, list, dict, Stream, Ref]


def is_name(value, *names) -> bool:
    return isinstance(value, Name) and (not names or value in names)

