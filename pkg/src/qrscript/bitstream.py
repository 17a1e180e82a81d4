"""Immutable bit strings and a cursor for reading them.

Bit order is MSB-first everywhere: the first bit of a field is its most
significant bit, and the first bit of a byte-aligned string is the most
significant bit of the first byte.  Printed strings therefore read exactly
like the binary expansion of each field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import Misaligned, Underrun, ValueOverflow

__all__ = [
    "BitString",
    "BitCursor",
    "write_bits",
    "read_bits",
    "to_bytes",
    "from_bytes",
]


class BitString:
    """An ordered, immutable sequence of bits.

    Stored as a non-negative integer plus an explicit length, so leading
    zero bits are preserved.  Construct from text (``BitString("1111 0000")``;
    spaces and underscores are ignored) or with :meth:`from_int`.
    """

    __slots__ = ("_value", "_length")

    def __init__(self, bits: Union[str, Iterable[int]] = "") -> None:
        if isinstance(bits, str):
            text = bits.replace(" ", "").replace("_", "")
            if text.strip("01"):
                raise ValueError(f"not a bit string: {bits!r}")
            self._value = int(text, 2) if text else 0
            self._length = len(text)
        else:
            value = 0
            length = 0
            for bit in bits:
                if bit not in (0, 1):
                    raise ValueError(f"bit must be 0 or 1, got {bit!r}")
                value = (value << 1) | bit
                length += 1
            self._value = value
            self._length = length

    @classmethod
    def from_int(cls, value: int, width: int) -> "BitString":
        """The ``width``-bit MSB-first expansion of ``value``."""
        if width < 0:
            raise ValueError("width must be non-negative")
        if value < 0 or value >> width:
            raise ValueOverflow(f"{value} does not fit in {width} bits")
        out = cls.__new__(cls)
        out._value = value
        out._length = width
        return out

    @classmethod
    def join(cls, parts: Iterable["BitString"]) -> "BitString":
        value = 0
        length = 0
        for part in parts:
            value = (value << part._length) | part._value
            length += part._length
        return cls.from_int(value, length)

    @property
    def value(self) -> int:
        """The whole string read as one unsigned integer."""
        return self._value

    def __len__(self) -> int:
        return self._length

    def __str__(self) -> str:
        if not self._length:
            return ""
        return format(self._value, f"0{self._length}b")

    def __repr__(self) -> str:
        return f"BitString({str(self)!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self._length == other._length and self._value == other._value

    def __hash__(self) -> int:
        return hash((self._value, self._length))

    def __add__(self, other: "BitString") -> "BitString":
        if not isinstance(other, BitString):
            return NotImplemented
        return BitString.from_int(
            (self._value << other._length) | other._value,
            self._length + other._length,
        )

    def __iter__(self) -> Iterator[int]:
        for i in range(self._length):
            yield (self._value >> (self._length - 1 - i)) & 1

    def __getitem__(self, index):
        if isinstance(index, slice):
            start, stop, step = index.indices(self._length)
            if step != 1:
                return BitString(list(self)[index])
            if stop <= start:
                return BitString()
            width = stop - start
            shifted = self._value >> (self._length - stop)
            return BitString.from_int(shifted & ((1 << width) - 1), width)
        if index < 0:
            index += self._length
        if not 0 <= index < self._length:
            raise IndexError("bit index out of range")
        return (self._value >> (self._length - 1 - index)) & 1

    def first_one(self) -> int | None:
        """Index of the first 1 bit, or None if every bit is 0."""
        if not self._value:
            return None
        return self._length - self._value.bit_length()

    def flip(self, index: int) -> "BitString":
        """Copy of this string with one bit inverted."""
        if not 0 <= index < self._length:
            raise IndexError("bit index out of range")
        return BitString.from_int(
            self._value ^ (1 << (self._length - 1 - index)), self._length
        )

    def hex(self) -> str:
        """Hex digits of the bits, zero-filled at the tail to a nibble."""
        if not self._length:
            return ""
        fill = -self._length % 4
        digits = (self._length + fill) // 4
        return format(self._value << fill, f"0{digits}x")


@dataclass
class BitCursor:
    """Read position over a :class:`BitString`.

    The cursor is the only mutable piece of the bit layer; keep one per
    reader.
    """

    source: BitString
    position: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.position <= len(self.source):
            raise ValueError("cursor position outside the source")

    @property
    def remaining(self) -> int:
        return len(self.source) - self.position

    def read(self, width: int) -> int:
        if width < 0:
            raise ValueError("width must be non-negative")
        if width > self.remaining:
            raise Underrun(
                f"need {width} bits at offset {self.position}, "
                f"only {self.remaining} left"
            )
        end = self.position + width
        value = self.source[self.position:end].value
        self.position = end
        return value

    def read_bitstring(self, width: int) -> BitString:
        start = self.position
        self.read(width)
        return self.source[start:self.position]

    def rest(self) -> BitString:
        """Everything from the cursor to the end; consumes it."""
        tail = self.source[self.position:]
        self.position = len(self.source)
        return tail


def write_bits(target: BitString, value: int, width: int) -> BitString:
    """Append ``value`` on ``width`` bits, MSB first."""
    return target + BitString.from_int(value, width)


def read_bits(cursor: BitCursor, width: int) -> int:
    return cursor.read(width)


def to_bytes(bits: BitString) -> bytes:
    if len(bits) % 8:
        raise Misaligned(f"{len(bits)} bits is not a whole number of bytes")
    return bits.value.to_bytes(len(bits) // 8, "big")


def from_bytes(data: bytes) -> BitString:
    return BitString.from_int(int.from_bytes(data, "big"), 8 * len(data))
