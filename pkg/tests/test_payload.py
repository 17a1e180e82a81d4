import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from qrscript.bitstream import BitString, from_bytes
from qrscript.errors import CapacityExceeded, LeadingZero, Misaligned, NotANumber, ZeroValue
from qrscript.header import Header, apply_padding, encode_header_body
from qrscript.payload import (
    Mode,
    Payload,
    capacity_check,
    decode_payload,
    encode_program,
    from_numeric_payload,
    to_binary_payload,
    to_numeric_payload,
)

from strategies import bit_strings, headers


def decimal_oracle(bits: BitString) -> str:
    """Schoolbook doubling over a little-endian list of decimal digits."""
    digits = [0]
    for bit in bits:
        carry = bit
        for i, d in enumerate(digits):
            d = 2 * d + carry
            digits[i], carry = d % 10, d // 10
        if carry:
            digits.append(carry)
    return "".join(map(str, reversed(digits)))


def test_binary_minimal():
    payload = to_binary_payload(apply_padding(encode_header_body(Header(), BitString())))
    assert payload == Payload(Mode.BINARY, b"\x40\x00")


def test_binary_errors():
    with pytest.raises(Misaligned):
        to_binary_payload(BitString("1"))
    with pytest.raises(CapacityExceeded):
        to_binary_payload(BitString.from_int(0, 8 * 2954))
    assert to_binary_payload(BitString()).data == b""


def test_numeric_examples():
    assert to_numeric_payload(BitString("1100")).data == "12"
    assert to_numeric_payload(BitString("1")).data == "1"
    with pytest.raises(LeadingZero):
        to_numeric_payload(BitString("0100"))
    with pytest.raises(LeadingZero):
        to_numeric_payload(BitString())


def test_from_numeric_examples():
    assert from_numeric_payload("12") == BitString("1100")
    assert from_numeric_payload("1") == BitString("1")
    assert from_numeric_payload("007") == BitString("111")
    for bad in ("", "12a", "-3", "١٢"):
        with pytest.raises(NotANumber):
            from_numeric_payload(bad)
    with pytest.raises(ZeroValue):
        from_numeric_payload("000")


@pytest.mark.parametrize("bits", [1, 2, 100, 1000, 14000, 23000])
def test_numeric_matches_oracle(bits):
    rng = random.Random(bits)
    stream = BitString.from_int((1 << (bits - 1)) | rng.getrandbits(bits - 1), bits)
    if bits > 3000:
        # oracle is quadratic; spot-check against Python's own big-int printing
        import sys

        old = sys.get_int_max_str_digits()
        sys.set_int_max_str_digits(0)
        try:
            expected = str(stream.value)
        finally:
            sys.set_int_max_str_digits(old)
    else:
        expected = decimal_oracle(stream)
    assert to_numeric_payload(stream).data == expected
    assert from_numeric_payload(expected) == stream


def test_numeric_capacity():
    # 10**7089 - 1 is the largest 7089-digit number
    largest = 10**7089 - 1
    stream = BitString.from_int(largest, largest.bit_length())
    assert len(to_numeric_payload(stream).data) == 7089
    bigger = stream + BitString("1111")
    with pytest.raises(CapacityExceeded):
        to_numeric_payload(bigger)


@pytest.mark.parametrize(
    "mode, size, fits",
    [
        (Mode.BINARY, 2953, True),
        (Mode.BINARY, 2954, False),
        (Mode.NUMERIC, 7089, True),
        (Mode.NUMERIC, 7090, False),
        (Mode.BINARY, 0, True),
    ],
)
def test_capacity_check(mode, size, fits):
    assert capacity_check(mode, size) is fits


def test_payload_type_checks():
    with pytest.raises(NotANumber):
        Payload(Mode.NUMERIC, "12x")
    with pytest.raises(TypeError):
        Payload(Mode.BINARY, "12")
    with pytest.raises(ValueError):
        Mode("alphanumeric")


@given(st.text(alphabet="01", max_size=400).map(lambda t: BitString("1" + t)))
def test_numeric_roundtrip(stream):
    assert from_numeric_payload(to_numeric_payload(stream).data) == stream


@given(st.integers(0, 50).flatmap(lambda n: st.binary(min_size=n, max_size=n)))
def test_binary_roundtrip(data):
    assert to_binary_payload(from_bytes(data)).data == data


@settings(max_examples=200)
@given(headers(), bit_strings(64))
def test_padding_transparency(header, code):
    binary = encode_program(header, code, Mode.BINARY)
    numeric = encode_program(header, code, Mode.NUMERIC)
    assert decode_payload(binary) == decode_payload(numeric) == (header, code)
