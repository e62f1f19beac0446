"""Resolved, navigable view of a parsed file.

:func:`build_document` walks the page tree (applying inheritance) and
then every object reachable from the catalog, recording what the rule
engine needs: fonts, dynamic or external features, filters in use and
device-dependent colour.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .cos import lexer as lx
from .cos.document import PdfFile
from .cos.filters import decode_stream, filter_chain
from .cos.objects import Name, ObjectId, PdfString, Ref, Stream
from .errors import (
    MissingCatalog,
    PageTreeCycle,
    PageTreeTypeError,
    PdfError,
    ResolutionCycle,
)

INHERITABLE = ("Resources", "MediaBox", "CropBox", "Rotate")
DEVICE_SPACES = ("DeviceGray", "DeviceRGB", "DeviceCMYK")
MAX_PAGE_DEPTH = 64
MAX_FORM_DEPTH = 32

# keys that point back up the graph; following them only re-finds parents
_BACK_LINKS = frozenset({"Parent", "P", "Prev", "Last", "First", "ParentTree"})


class FeatureKind(str, enum.Enum):
    SOUND_ANNOT = "SoundAnnot"
    MOVIE_ANNOT = "MovieAnnot"
    SCREEN_ANNOT = "ScreenAnnot"
    SOUND_ACTION = "SoundAction"
    MOVIE_ACTION = "MovieAction"
    LAUNCH_ACTION = "LaunchAction"
    REMOTE_GOTO_ACTION = "RemoteGoToAction"
    EXTERNAL_STREAM_DATA = "ExternalStreamData"
    EMBEDDED_FILE_ATTACHMENT = "EmbeddedFileAttachment"
    JAVASCRIPT_ACTION = "JavaScriptAction"
    NON_CONTENT_EXTERNAL_REF = "NonContentExternalRef"

    def __str__(self):
        return self.value


ANNOT_KINDS = {
    "Sound": FeatureKind.SOUND_ANNOT,
    "Movie": FeatureKind.MOVIE_ANNOT,
    "Screen": FeatureKind.SCREEN_ANNOT,
    "FileAttachment": FeatureKind.EMBEDDED_FILE_ATTACHMENT,
}
ACTION_KINDS = {
    "Sound": FeatureKind.SOUND_ACTION,
    "Movie": FeatureKind.MOVIE_ACTION,
    "Launch": FeatureKind.LAUNCH_ACTION,
    "GoToR": FeatureKind.REMOTE_GOTO_ACTION,
    "JavaScript": FeatureKind.JAVASCRIPT_ACTION,
    "URI": FeatureKind.NON_CONTENT_EXTERNAL_REF,
}

# colour operators that select a device space implicitly
_COLOR_OPS = {
    b"g": "DeviceGray", b"G": "DeviceGray",
    b"rg": "DeviceRGB", b"RG": "DeviceRGB",
    b"k": "DeviceCMYK", b"K": "DeviceCMYK",
}


@dataclass
class Page:
    object_id: ObjectId | None
    resources: dict
    annotations: list[dict]
    content_stream_ids: list[ObjectId]
    media_box: list | None = None
    node: dict = field(default_factory=dict, repr=False)


@dataclass
class FontUse:
    font_dict: dict
    subtype: Name | None
    descriptor: dict | None
    descendant: dict | None
    page_index: int
    resource_name: str
    font_id: ObjectId | None = None
    location: str = ""


@dataclass
class FeatureUse:
    kind: FeatureKind
    location: str
    object_id: ObjectId | None = None


@dataclass
class Document:
    file: PdfFile
    catalog: dict
    pages: list[Page]
    info: dict | None
    fonts: list[FontUse] = field(default_factory=list)
    features: list[FeatureUse] = field(default_factory=list)
    output_intents: list[dict] = field(default_factory=list)
    filter_census: list[tuple[str, str]] = field(default_factory=list)
    device_colors: list[tuple[str, str]] = field(default_factory=list)
    info_anomalies: list[tuple[str, str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    page_tree_count: int | None = None

    @property
    def object_count(self) -> int:
        return len(self.file.objects)

    def resolve(self, value):
        """Resolve without raising; a reference cycle reads as ``None``."""
        try:
            return self.file.resolve(value)
        except ResolutionCycle as e:
            note = f"reference cycle ignored: {e}"
            if note not in self.notes:
                self.notes.append(note)
            return None

    def decode(self, stream: Stream) -> bytes:
        return decode_stream(stream, self.resolve)


def _as_dict(value) -> dict:
    if isinstance(value, Stream):
        return value.dict
    return value if isinstance(value, dict) else {}


def _as_list(value) -> list:
    return value if isinstance(value, list) else []


def build_document(file: PdfFile) -> Document:
    doc = Document(file=file, catalog={}, pages=[], info=None, notes=list(file.notes))
    catalog = doc.resolve(file.trailer.get("Root"))
    if not isinstance(catalog, dict):
        raise MissingCatalog("trailer Root does not resolve to a dictionary")
    doc.catalog = catalog
    doc.pages = _walk_page_tree(doc)
    info = doc.resolve(file.trailer.get("Info"))
    doc.info = info if isinstance(info, dict) else None
    _, doc.info_anomalies = _info_entries(doc)
    doc.features = collect_features(doc)
    doc.fonts = collect_fonts(doc)
    doc.output_intents = [
        d for d in (doc.resolve(v) for v in _as_list(doc.resolve(catalog.get("OutputIntents"))))
        if isinstance(d, dict)
    ]
    doc.device_colors.extend(_scan_content_colors(doc))
    return doc


# -- page tree ------------------------------------------------------------

def _walk_page_tree(doc: Document) -> list[Page]:
    root_ref = doc.catalog.get("Pages")
    root = doc.resolve(root_ref)
    if not isinstance(root, dict):
        raise PageTreeTypeError("catalog has no page tree")
    count = doc.resolve(root.get("Count"))
    doc.page_tree_count = count if isinstance(count, int) and not isinstance(count, bool) else None

    pages: list[Page] = []
    seen: set[ObjectId] = set()
    root_id = root_ref.id if isinstance(root_ref, Ref) else None
    if root_id:
        seen.add(root_id)
    # (node, node id, inherited attributes, depth)
    stack = [(root, root_id, {}, 0)]
    while stack:
        node, node_id, inherited, depth = stack.pop()
        if depth > MAX_PAGE_DEPTH:
            raise PageTreeCycle("page tree nesting too deep")
        node_type = node.get("Type")
        if node_type is None:
            node_type = "Pages" if "Kids" in node else "Page"
            doc.notes.append(f"page tree node {node_id or '(direct)'} lacks /Type; treated as {node_type}")
        attrs = dict(inherited)
        for key in INHERITABLE:
            if key in node:
                attrs[key] = node[key]
        if node_type == "Pages":
            kids = doc.resolve(node.get("Kids"))
            if not isinstance(kids, list):
                raise PageTreeTypeError(f"Pages node {node_id} has no Kids array")
            children = []
            for kid in kids:
                kid_id = kid.id if isinstance(kid, Ref) else None
                if kid_id is not None:
                    if kid_id in seen:
                        raise PageTreeCycle(f"page tree revisits object {kid_id}")
                    seen.add(kid_id)
                value = doc.resolve(kid)
                if not isinstance(value, dict):
                    raise PageTreeTypeError(f"page tree kid {kid_id} is not a dictionary")
                children.append((value, kid_id, attrs, depth + 1))
            stack.extend(reversed(children))
        elif node_type == "Page":
            pages.append(_make_page(doc, node, node_id, attrs))
        else:
            raise PageTreeTypeError(f"page tree node {node_id} has /Type /{node_type}")
    return pages


def _make_page(doc: Document, node: dict, node_id, attrs: dict) -> Page:
    resources = _as_dict(doc.resolve(attrs.get("Resources")))
    annots = [a for a in (doc.resolve(x) for x in _as_list(doc.resolve(node.get("Annots"))))
              if isinstance(a, dict)]
    contents = node.get("Contents")
    refs = contents if isinstance(contents, list) else [contents]
    if isinstance(contents, Ref) and isinstance(doc.resolve(contents), list):
        refs = doc.resolve(contents)
    ids = [r.id for r in refs if isinstance(r, Ref)]
    media = doc.resolve(attrs.get("MediaBox"))
    return Page(node_id, resources, annots, ids, media if isinstance(media, list) else None, node)


# -- reachability census --------------------------------------------------

def _device_space(doc: Document, cs, depth: int = 0) -> str | None:
    cs = doc.resolve(cs)
    if isinstance(cs, Name):
        return str(cs) if cs in DEVICE_SPACES else None
    if isinstance(cs, list) and cs and depth < 4:
        family = doc.resolve(cs[0])
        if family == "Indexed" and len(cs) > 1:
            return _device_space(doc, cs[1], depth + 1)
        if family in ("Separation", "DeviceN") and len(cs) > 2:
            return _device_space(doc, cs[2], depth + 1)
        if family == "Pattern" and len(cs) > 1:
            return _device_space(doc, cs[1], depth + 1)
    return None


def collect_features(doc: Document) -> list[FeatureUse]:
    """Classify every annotation, action and stream reachable from the catalog.

    Also fills ``doc.filter_census`` and records image colour spaces into
    ``doc.device_colors``; each indirect object is visited once.
    """
    features: list[FeatureUse] = []
    doc.filter_census = []
    visited: set[ObjectId] = set()
    for page in doc.pages:
        if page.object_id is not None:
            visited.add(page.object_id)

    roots = [(page.node, f"page {i + 1}", page.object_id) for i, page in enumerate(doc.pages)]
    root_ref = doc.file.trailer.get("Root")
    root_id = root_ref.id if isinstance(root_ref, Ref) else None
    if root_id is not None:
        visited.add(root_id)
    roots.append((doc.catalog, "catalog", root_id))

    names = _as_dict(doc.resolve(doc.catalog.get("Names")))
    if "EmbeddedFiles" in names:
        features.append(FeatureUse(FeatureKind.EMBEDDED_FILE_ATTACHMENT, "catalog → Names → EmbeddedFiles"))
    if "JavaScript" in names:
        features.append(FeatureUse(FeatureKind.JAVASCRIPT_ACTION, "catalog → Names → JavaScript"))

    for root, root_path, rid in roots:
        stack = [(root, root_path, None, rid)]
        while stack:
            value, path, ctx, oid = stack.pop()
            if isinstance(value, Ref):
                if value.id in visited:
                    continue
                visited.add(value.id)
                try:
                    target = doc.file.resolve(value)
                except ResolutionCycle:
                    continue
                stack.append((target, path, ctx, value.id))
                continue
            if isinstance(value, Stream):
                _inspect_stream(doc, value, path, oid, features)
                value = value.dict
            if isinstance(value, dict):
                _classify(doc, value, path, ctx, oid, features)
                children = []
                for key, child in value.items():
                    if key in _BACK_LINKS:
                        continue
                    if key in ("A", "OpenAction") or (key == "Next" and ctx == "action"):
                        child_ctx = "action"
                    elif key == "AA":
                        child_ctx = "aa"
                    elif key == "Annots":
                        child_ctx = "annots"
                    elif ctx == "aa":
                        child_ctx = "action"
                    else:
                        child_ctx = None
                    children.append((child, f"{path} → {key}", child_ctx, None if isinstance(child, Ref) else oid))
                stack.extend(reversed(children))
            elif isinstance(value, list):
                elem_ctx = "annot" if ctx == "annots" else ("action" if ctx == "action" else None)
                stack.extend(reversed([
                    (child, f"{path}[{i}]", elem_ctx, None if isinstance(child, Ref) else oid)
                    for i, child in enumerate(value)
                ]))
    return features


def _inspect_stream(doc: Document, stream: Stream, path: str, oid, features: list) -> None:
    sdict = stream.dict
    if any(k in sdict for k in ("F", "FFilter", "FDecodeParms")):
        features.append(FeatureUse(FeatureKind.EXTERNAL_STREAM_DATA, path, oid))
    try:
        chain = filter_chain(stream, doc.resolve)
    except PdfError:
        chain = []
    for name, _ in chain:
        doc.filter_census.append((name, path))
    if doc.resolve(sdict.get("Subtype")) == "Image":
        space = _device_space(doc, sdict.get("ColorSpace"))
        if space:
            doc.device_colors.append((space, path))


def _classify(doc: Document, d: dict, path: str, ctx, oid, features: list) -> None:
    dtype = doc.resolve(d.get("Type"))
    if ctx == "annot" or dtype == "Annot":
        kind = ANNOT_KINDS.get(doc.resolve(d.get("Subtype")))
        if kind is not None:
            features.append(FeatureUse(kind, path, oid))
    if ctx == "action" or dtype == "Action":
        s = doc.resolve(d.get("S"))
        kind = ACTION_KINDS.get(s) if isinstance(s, Name) else None
        if kind is not None:
            features.append(FeatureUse(kind, path, oid))


# -- fonts ----------------------------------------------------------------

def collect_fonts(doc: Document) -> list[FontUse]:
    """One :class:`FontUse` per distinct (font object, page) pair."""
    out: list[FontUse] = []
    for index, page in enumerate(doc.pages):
        seen_pairs: set = set()
        seen_forms: set = set()
        _fonts_in_resources(doc, page.resources, index, f"page {index + 1}", seen_forms, seen_pairs, out, 0)
    return out


def _fonts_in_resources(doc, resources: dict, index: int, prefix: str,
                        seen_forms: set, seen_pairs: set, out: list, depth: int) -> None:
    fonts = _as_dict(doc.resolve(resources.get("Font")))
    for name, ref in fonts.items():
        key = ref.id if isinstance(ref, Ref) else (prefix, name)
        if key in seen_pairs:
            continue
        seen_pairs.add(key)
        font = doc.resolve(ref)
        font = font if isinstance(font, dict) else {}
        subtype = doc.resolve(font.get("Subtype"))
        subtype = subtype if isinstance(subtype, Name) else None
        descendant = None
        desc_source = font
        if subtype == "Type0":
            kids = _as_list(doc.resolve(font.get("DescendantFonts")))
            first = doc.resolve(kids[0]) if kids else None
            descendant = first if isinstance(first, dict) else None
            desc_source = descendant or {}
        descriptor = doc.resolve(desc_source.get("FontDescriptor"))
        out.append(FontUse(
            font_dict=font,
            subtype=subtype,
            descriptor=descriptor if isinstance(descriptor, dict) else None,
            descendant=descendant,
            page_index=index,
            resource_name=str(name),
            font_id=ref.id if isinstance(ref, Ref) else None,
            location=f"{prefix} → Font/{name}",
        ))
    if depth >= MAX_FORM_DEPTH:
        return
    xobjects = _as_dict(doc.resolve(resources.get("XObject")))
    for name, ref in xobjects.items():
        form = doc.resolve(ref)
        if not isinstance(form, Stream) or doc.resolve(form.dict.get("Subtype")) != "Form":
            continue
        form_key = ref.id if isinstance(ref, Ref) else id(form)
        if form_key in seen_forms:
            continue
        seen_forms.add(form_key)
        form_res = doc.resolve(form.dict.get("Resources"))
        form_res = form_res if isinstance(form_res, dict) else resources
        _fonts_in_resources(doc, form_res, index, f"{prefix} → XObject/{name}",
                            seen_forms, seen_pairs, out, depth + 1)


# -- info dictionary ------------------------------------------------------

def _info_entries(doc: Document) -> tuple[list[tuple[Name, bytes]], list[tuple[str, str]]]:
    entries: list[tuple[Name, bytes]] = []
    anomalies: list[tuple[str, str]] = []
    for key, value in (doc.info or {}).items():
        value = doc.resolve(value)
        if isinstance(value, PdfString):
            entries.append((key, bytes(value)))
        else:
            anomalies.append((str(key), type(value).__name__ if value is not None else "null"))
    return entries, anomalies


def extract_info(doc: Document) -> list[tuple[Name, bytes]]:
    """String-valued entries of the document information dictionary.

    Entries of any other type are skipped here and listed in
    ``doc.info_anomalies``.
    """
    entries, doc.info_anomalies = _info_entries(doc)
    return entries


# -- content streams ------------------------------------------------------

def _scan_content_colors(doc: Document) -> list[tuple[str, str]]:
    found: dict[str, str] = {}
    for index, page in enumerate(doc.pages):
        data = bytearray()
        for cid in page.content_stream_ids:
            stream = doc.resolve(Ref(*cid))
            if isinstance(stream, Stream):
                try:
                    data += doc.decode(stream) + b"\n"
                except PdfError:
                    continue
        _scan_ops(doc, bytes(data), page.resources, f"page {index + 1}", found, set(), 0)
    return [(space, loc) for space, loc in found.items()]


def _scan_ops(doc, data: bytes, resources: dict, location: str, found: dict, forms: set, depth: int) -> None:
    lexer = lx.Lexer(data)
    operands: list = []
    while True:
        try:
            tok = lexer.next()
        except PdfError:
            return
        if tok is None:
            return
        if tok.kind != lx.KEYWORD:
            operands.append(tok)
            if len(operands) > 64:
                del operands[:-8]
            continue
        op = tok.value
        if op in _COLOR_OPS:
            found.setdefault(_COLOR_OPS[op], location)
        elif op in (b"cs", b"CS") and operands and operands[-1].kind == lx.NAME:
            name = operands[-1].value
            space = str(name) if name in DEVICE_SPACES else _device_space(
                doc, _as_dict(doc.resolve(resources.get("ColorSpace"))).get(name))
            if space:
                found.setdefault(space, location)
        elif op == b"BI":
            end = data.find(b"ID", lexer.pos)
            stop = data.find(b"EI", end + 2) if end >= 0 else -1
            if stop < 0:
                return
            lexer.pos = stop + 2
        elif op == b"Do" and operands and operands[-1].kind == lx.NAME and depth < MAX_FORM_DEPTH:
            xobjects = _as_dict(doc.resolve(resources.get("XObject")))
            ref = xobjects.get(operands[-1].value)
            form = doc.resolve(ref)
            key = ref.id if isinstance(ref, Ref) else id(form)
            if isinstance(form, Stream) and doc.resolve(form.dict.get("Subtype")) == "Form" and key not in forms:
                forms.add(key)
                try:
                    body = doc.decode(form)
                except PdfError:
                    body = b""
                res = doc.resolve(form.dict.get("Resources"))
                _scan_ops(doc, body, res if isinstance(res, dict) else resources,
                          f"{location} → XObject/{operands[-1].value}", found, forms, depth + 1)
        operands.clear()
