from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdfa1.cos import parse_object
from pdfa1.cos.objects import IndirectObject, Name, ObjectId, PdfString, Ref, Stream
from pdfa1.errors import LengthMismatch, MalformedToken, SyntaxProblem, UnbalancedStructure
from pdfa1.writer import format_value


def test_dictionary_with_reference():
    value = parse_object(b"<< /Type /Catalog /Pages 2 0 R /Flag true /Nothing null >>")
    assert value == {"Type": "Catalog", "Pages": Ref(2, 0), "Flag": True, "Nothing": None}
    assert list(value) == ["Type", "Pages", "Flag", "Nothing"]


def test_array_of_numbers_is_not_reference():
    assert parse_object(b"[1 2 3 4 R]") == [1, 2, Ref(3, 4)]
    assert parse_object(b"[1 2 3]") == [1, 2, 3]


def test_indirect_stream():
    obj = parse_object(b"7 0 obj\n<< /Length 5 >>\nstream\nHello\nendstream\nendobj")
    assert isinstance(obj, IndirectObject)
    assert obj.id == ObjectId(7, 0)
    assert isinstance(obj.value, Stream)
    assert obj.value.raw == b"Hello"


def test_stream_length_mismatch_strict():
    with pytest.raises(LengthMismatch) as e:
        parse_object(b"1 0 obj\n<< /Length 3 >>\nstream\nHello\nendstream\nendobj")
    assert e.value.declared == 3
    assert e.value.actual == 5


def test_stream_length_mismatch_lenient():
    obj = parse_object(b"1 0 obj\n<< /Length 3 >>\nstream\nHello\nendstream\nendobj", lenient=True)
    assert obj.value.raw == b"Hello"


def test_indirect_length():
    data = b"1 0 obj\n<< /Length 2 0 R >>\nstream\nabc\nendstream\nendobj"
    obj = parse_object(data, length_resolver=lambda ref: 3 if ref == Ref(2, 0) else None)
    assert obj.value.raw == b"abc"


@pytest.mark.parametrize("src, exc", [
    (b"<< /A 1", UnbalancedStructure),
    (b"[1 2", UnbalancedStructure),
    (b"]", UnbalancedStructure),
    (b"<< /A >>", UnbalancedStructure),
    (b"<< 1 2 >>", SyntaxProblem),
    (b"0 0 R", SyntaxProblem),
    (b"1 70000 R", SyntaxProblem),
    (b"[" * 200 + b"]" * 200, UnbalancedStructure),
])
def test_malformed_values(src, exc):
    with pytest.raises(exc):
        parse_object(src)


def test_hex_form_kept():
    value = parse_object(b"<414243>")
    assert value == b"ABC" and value.hex_form


cos_values = st.recursive(
    st.none() | st.booleans() | st.integers(-(2**40), 2**40)
    | st.builds(lambda b: PdfString(b), st.binary(max_size=20))
    | st.builds(Name.from_bytes, st.binary(min_size=1, max_size=10))
    | st.builds(Ref, st.integers(1, 10**6), st.integers(0, 65535)),
    lambda children: st.lists(children, max_size=5)
    | st.dictionaries(st.builds(Name.from_bytes, st.binary(min_size=1, max_size=8)), children, max_size=5),
    max_leaves=25,
)


@given(cos_values)
def test_write_then_parse_roundtrip(value):
    assert parse_object(format_value(value)) == value


@given(st.binary(max_size=200))
def test_parser_only_raises_structured_errors(data):
    try:
        parse_object(data)
        parse_object(data, lenient=True)
    except (SyntaxProblem, MalformedToken):
        pass
