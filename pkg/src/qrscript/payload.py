"""QR input-mode payloads.

Binary mode packs the padded stream into bytes.  Numeric mode reads the
whole stream as one unsigned integer and writes it in decimal; the stream
must start with its padding marker bit (k = 0), since leading zero bits
would not survive the conversion.

Capacities are the largest QR symbol's (version 40, level L) limits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .bitstream import BitString, from_bytes, to_bytes
from .errors import CapacityExceeded, LeadingZero, Misaligned, NotANumber, ZeroValue
from .header import Header, apply_padding, decode_header, encode_header_body
from .security import SecurityProfileRegistry

__all__ = [
    "Mode",
    "Payload",
    "BINARY_CAPACITY",
    "NUMERIC_CAPACITY",
    "capacity_check",
    "to_binary_payload",
    "to_numeric_payload",
    "from_numeric_payload",
    "payload_to_stream",
    "frame",
    "encode_program",
    "decode_payload",
]

BINARY_CAPACITY = 2953
NUMERIC_CAPACITY = 7089

# int <-> str conversions are capped at 4300 digits by default (CPython >= 3.10.7)
_CHUNK_DIGITS = 1000
_CHUNK = 10**_CHUNK_DIGITS


class Mode(enum.Enum):
    BINARY = "binary"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class Payload:
    mode: Mode
    data: Union[bytes, str]

    def __post_init__(self) -> None:
        if self.mode is Mode.BINARY:
            if not isinstance(self.data, (bytes, bytearray)):
                raise TypeError("binary payload data must be bytes")
        elif not (isinstance(self.data, str) and self.data.isascii() and self.data.isdigit()):
            raise NotANumber("numeric payload data must be a string of digits 0-9")
        if not capacity_check(self.mode, len(self.data)):
            raise CapacityExceeded(_capacity_message(self.mode, len(self.data)))


def _capacity_message(mode: Mode, size: int) -> str:
    if mode is Mode.BINARY:
        return f"{size} bytes exceeds the binary-mode limit of {BINARY_CAPACITY}"
    return f"{size} digits exceeds the numeric-mode limit of {NUMERIC_CAPACITY}"


def capacity_check(mode: Mode, size: int) -> bool:
    limit = BINARY_CAPACITY if Mode(mode) is Mode.BINARY else NUMERIC_CAPACITY
    return 0 <= size <= limit


def to_binary_payload(stream: BitString) -> Payload:
    if len(stream) % 8:
        raise Misaligned(f"binary mode needs a padded stream, got {len(stream)} bits")
    if len(stream) // 8 > BINARY_CAPACITY:
        raise CapacityExceeded(_capacity_message(Mode.BINARY, len(stream) // 8))
    return Payload(Mode.BINARY, to_bytes(stream))


def _int_to_decimal(value: int) -> str:
    if value < _CHUNK:
        return str(value)
    chunks = []
    while value:
        value, low = divmod(value, _CHUNK)
        chunks.append(low)
    head = str(chunks.pop())
    return head + "".join(str(c).zfill(_CHUNK_DIGITS) for c in reversed(chunks))


def _decimal_to_int(digits: str) -> int:
    value = 0
    for i in range(0, len(digits), _CHUNK_DIGITS):
        piece = digits[i:i + _CHUNK_DIGITS]
        value = value * 10 ** len(piece) + int(piece)
    return value


def to_numeric_payload(stream: BitString) -> Payload:
    if not len(stream) or stream[0] != 1:
        raise LeadingZero("numeric mode needs a stream starting with its marker bit 1")
    digits = _int_to_decimal(stream.value)
    if len(digits) > NUMERIC_CAPACITY:
        raise CapacityExceeded(_capacity_message(Mode.NUMERIC, len(digits)))
    return Payload(Mode.NUMERIC, digits)


def from_numeric_payload(digits: str) -> BitString:
    """Minimal-width binary expansion of a decimal digit string."""
    if not digits or not (digits.isascii() and digits.isdigit()):
        raise NotANumber(f"not a decimal digit string: {digits[:40]!r}")
    value = _decimal_to_int(digits)
    if value == 0:
        raise ZeroValue("a numeric payload must encode a value of at least 1")
    return BitString.from_int(value, value.bit_length())


def payload_to_stream(payload: Payload) -> BitString:
    if payload.mode is Mode.BINARY:
        return from_bytes(bytes(payload.data))
    return from_numeric_payload(payload.data)


def frame(body: BitString, mode: Mode) -> BitString:
    """Prefix the padding marker suited to ``mode``."""
    if Mode(mode) is Mode.BINARY:
        return apply_padding(body)
    return BitString("1") + body


def encode_program(
    header: Header, dialect_code: BitString, mode: Mode = Mode.BINARY
) -> Payload:
    stream = frame(encode_header_body(header, dialect_code), mode)
    if Mode(mode) is Mode.BINARY:
        return to_binary_payload(stream)
    return to_numeric_payload(stream)


def decode_payload(
    payload: Payload, registry: Optional[SecurityProfileRegistry] = None
) -> Tuple[Header, BitString]:
    return decode_header(payload_to_stream(payload), registry)
