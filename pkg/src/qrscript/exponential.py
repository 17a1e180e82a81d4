"""Exponential (size-doubling) encoding of unsigned integers.

A value is written in successive fields of width ``n0, n0, 2*n0, 4*n0, ...``.
A field holding all ones is saturated: its maximum ``2**w - 1`` is taken off
the value and the next field follows.  The first field that is not all ones
ends the code and carries what is left.  With ``n0 = 4``::

    12  -> 1100
    15  -> 1111 0000
    120 -> 1111 1111 01011010
    300 -> 1111 1111 11111111 0000000000001111
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .bitstream import BitCursor, BitString
from .errors import Underrun

__all__ = [
    "ExpEncodingParams",
    "DEFAULT_PARAMS",
    "field_widths",
    "encode_exponential",
    "decode_exponential",
    "exponential_length",
]


@dataclass(frozen=True)
class ExpEncodingParams:
    n0: int = 4

    def __post_init__(self) -> None:
        if self.n0 < 1:
            raise ValueError(f"initial width must be at least 1, got {self.n0}")


DEFAULT_PARAMS = ExpEncodingParams(4)


def field_widths(n0: int = 4) -> Iterator[int]:
    """Yield the field-width schedule n0, n0, 2*n0, 4*n0, ... forever."""
    yield n0
    width = n0
    while True:
        yield width
        width *= 2


def _params(params: ExpEncodingParams | int | None) -> ExpEncodingParams:
    if params is None:
        return DEFAULT_PARAMS
    if isinstance(params, int):
        return ExpEncodingParams(params)
    return params


def encode_exponential(
    value: int, params: ExpEncodingParams | int | None = None
) -> BitString:
    if value < 0:
        raise ValueError(f"exponential encoding is unsigned, got {value}")
    n0 = _params(params).n0
    fields = []
    remainder = value
    for width in field_widths(n0):
        saturated = (1 << width) - 1
        # an all-ones field always means "continue", even when remainder == max
        if remainder < saturated:
            fields.append(BitString.from_int(remainder, width))
            return BitString.join(fields)
        fields.append(BitString.from_int(saturated, width))
        remainder -= saturated
    raise AssertionError("unreachable")


def decode_exponential(
    cursor: BitCursor, params: ExpEncodingParams | int | None = None
) -> int:
    """Read one exponentially encoded integer, leaving the cursor after it.

    Raises :class:`Underrun` if the stream ends inside a field, including
    the case where every remaining field is saturated.
    """
    n0 = _params(params).n0
    total = 0
    for width in field_widths(n0):
        if width > cursor.remaining:
            raise Underrun(
                f"exponential field of {width} bits at offset "
                f"{cursor.position}, only {cursor.remaining} left"
            )
        field = cursor.read(width)
        total += field
        if field != (1 << width) - 1:
            return total
    raise AssertionError("unreachable")


def exponential_length(value: int, params: ExpEncodingParams | int | None = None) -> int:
    """Number of bits :func:`encode_exponential` uses for ``value``."""
    if value < 0:
        raise ValueError(f"exponential encoding is unsigned, got {value}")
    n0 = _params(params).n0
    length = 0
    remainder = value
    for width in field_widths(n0):
        length += width
        saturated = (1 << width) - 1
        if remainder < saturated:
            return length
        remainder -= saturated
    raise AssertionError("unreachable")
