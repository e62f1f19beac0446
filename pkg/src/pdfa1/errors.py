"""Exception hierarchy.

Every failure the library reports on purpose derives from :class:`PdfError`;
anything else escaping a public call is a bug.
"""

from __future__ import annotations


class PdfError(Exception):
    pass


# -- syntax ---------------------------------------------------------------

class SyntaxProblem(PdfError):
    pass


class MalformedToken(SyntaxProblem):
    def __init__(self, offset: int, reason: str):
        super().__init__(f"malformed token at offset {offset}: {reason}")
        self.offset = offset
        self.reason = reason


class UnbalancedStructure(SyntaxProblem):
    def __init__(self, offset: int, reason: str):
        super().__init__(f"unbalanced structure at offset {offset}: {reason}")
        self.offset = offset
        self.reason = reason


class LengthMismatch(SyntaxProblem):
    def __init__(self, declared: int, actual: int | None):
        super().__init__(f"stream Length {declared} does not match data ({actual})")
        self.declared = declared
        self.actual = actual


# -- file structure -------------------------------------------------------

class NotAPdf(PdfError):
    pass


class XrefError(PdfError):
    pass


class XrefCycle(XrefError):
    pass


class XrefOutOfBounds(XrefError):
    pass


class MissingTrailer(XrefError):
    pass


class XrefStreamUnsupported(XrefError):
    """Cross-reference streams belong to PDF 1.5 and later."""


class BrokenXref(PdfError):
    pass


class ResolutionCycle(PdfError):
    def __init__(self, chain):
        super().__init__("reference cycle: " + " -> ".join(f"{n} {g} R" for n, g in chain))
        self.chain = list(chain)


# -- streams --------------------------------------------------------------

class StreamError(PdfError):
    pass


class CorruptStreamData(StreamError):
    def __init__(self, filter_name: str, reason: str):
        super().__init__(f"{filter_name}: {reason}")
        self.filter = filter_name
        self.reason = reason


class UnknownFilter(StreamError):
    def __init__(self, name: str):
        super().__init__(f"unknown filter /{name}")
        self.name = name


# -- document model -------------------------------------------------------

class DocumentError(PdfError):
    pass


class MissingCatalog(DocumentError):
    pass


class PageTreeCycle(DocumentError):
    pass


class PageTreeTypeError(DocumentError):
    pass


# -- metadata / colour ----------------------------------------------------

class MetadataNotAStream(PdfError):
    pass


class XmlMalformed(PdfError):
    def __init__(self, position, reason: str):
        super().__init__(f"malformed XML at {position}: {reason}")
        self.position = position
        self.reason = reason


class NoRdfRoot(PdfError):
    pass


class IccError(PdfError):
    pass


class TooShort(IccError):
    pass


class BadMagic(IccError):
    def __init__(self, found: bytes):
        super().__init__(f"ICC signature {found!r} is not b'acsp'")
        self.found = found


# -- remediation ----------------------------------------------------------

class FixupError(PdfError):
    pass


class InfoStringUndecodable(FixupError):
    def __init__(self, key: str):
        super().__init__(f"info entry /{key} cannot be decoded as text")
        self.key = key


class BadProfile(FixupError):
    pass


class DanglingReference(FixupError):
    def __init__(self, oid):
        super().__init__(f"reference to missing object {oid[0]} {oid[1]} R")
        self.oid = oid


class Unfixable(FixupError):
    def __init__(self, note: str):
        super().__init__(note)
        self.note = note


class InconsistentSpec(PdfError):
    pass


class ConfigError(PdfError):
    """Bad configuration file or rule selection."""
