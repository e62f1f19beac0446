"""COS layer: tokenizer, object parser, file structure and stream filters."""

from .document import PdfFile, XrefEntry, XrefTable, open_file, parse_xref_chain, resolve
from .filters import OpaqueBytes, decode_stream
from .lexer import lex_tokens
from .objects import IndirectObject, Name, ObjectId, PdfString, Ref, Stream, Token
from .parser import parse_object

__all__ = [
    "IndirectObject",
    "Name",
    "ObjectId",
    "OpaqueBytes",
    "PdfFile",
    "PdfString",
    "Ref",
    "Stream",
    "Token",
    "XrefEntry",
    "XrefTable",
    "decode_stream",
    "lex_tokens",
    "open_file",
    "parse_object",
    "parse_xref_chain",
    "resolve",
]
