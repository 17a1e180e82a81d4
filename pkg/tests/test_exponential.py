import random

import pytest
from hypothesis import given
import hypothesis.strategies as st

from qrscript.bitstream import BitCursor, BitString
from qrscript.errors import Underrun
from qrscript.exponential import (
    ExpEncodingParams,
    decode_exponential,
    encode_exponential,
    exponential_length,
    field_widths,
)

# Table 1 of the format description, n0 = 4
TABLE = [
    (12, "1100"),
    (14, "1110"),
    (15, "1111 0000"),
    (120, "1111 1111 01011010"),
    (300, "1111 1111 11111111 0000000000001111"),
]


def reference_encode(value, n0):
    """Brute-force oracle: walk the width table with string arithmetic."""
    widths = [n0, n0] + [n0 * 2**i for i in range(1, 40)]
    out = ""
    for w in widths:
        top = int("1" * w, 2)
        if value < top:
            return out + bin(value)[2:].zfill(w)
        out += "1" * w
        value -= top
    raise AssertionError


@pytest.mark.parametrize("value, code", TABLE)
def test_table_vectors(value, code):
    assert encode_exponential(value, 4) == BitString(code)
    cursor = BitCursor(BitString(code))
    assert decode_exponential(cursor, 4) == value
    assert cursor.remaining == 0


def test_zero():
    assert str(encode_exponential(0)) == "0000"


def test_width_schedule():
    gen = field_widths(4)
    assert [next(gen) for _ in range(6)] == [4, 4, 8, 16, 32, 64]


def test_params():
    with pytest.raises(ValueError):
        ExpEncodingParams(0)
    with pytest.raises(ValueError):
        encode_exponential(-1)


@pytest.mark.parametrize("n0", [1, 2, 3, 4, 8])
def test_matches_reference(n0):
    rng = random.Random(n0)
    values = list(range(600)) + [rng.randrange(2**40) for _ in range(300)]
    for value in values:
        assert str(encode_exponential(value, n0)) == reference_encode(value, n0)
        assert exponential_length(value, n0) == len(reference_encode(value, n0))


@pytest.mark.parametrize(
    "bits", ["", "111", "1111", "1111 1111", "1111 1111 1111111", "1111 1111 11111111"]
)
def test_underrun(bits):
    with pytest.raises(Underrun):
        decode_exponential(BitCursor(BitString(bits)))


def test_decoder_stops_after_code():
    cursor = BitCursor(BitString("1111 0011 1010"))
    assert decode_exponential(cursor) == 18
    assert cursor.position == 8


@given(st.integers(0, 10**6), st.sampled_from([1, 2, 4, 8]), st.text(alphabet="01", max_size=20))
def test_roundtrip_with_trailer(value, n0, trailer):
    code = encode_exponential(value, n0)
    cursor = BitCursor(code + BitString(trailer))
    assert decode_exponential(cursor, n0) == value
    assert cursor.position == len(code)


def test_monotone_length():
    lengths = [exponential_length(x) for x in range(70000)]
    assert all(a <= b for a, b in zip(lengths, lengths[1:]))
