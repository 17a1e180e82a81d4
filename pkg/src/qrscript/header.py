"""QRscript header codec.

Stream layout, in order::

    padding     k zero bits then a 1 (k brings the stream to a byte multiple)
    continuation 0, or 1 + exp(sequence number) + exp(total fragments - 1)
    security    exp(profile id) + signature bits (length set by the profile)
    URL         0, or 1 + UTF-8 bytes + 0x03
    dialect     exp(dialect id) + exp(dialect version)
    dialect code, unparsed

``exp`` is the exponential encoding with a 4-bit base field.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, NamedTuple, Optional, Tuple

from .bitstream import BitCursor, BitString, from_bytes
from .errors import (
    AllZeros,
    BadContinuation,
    InvalidUrl,
    InvariantViolation,
    MalformedUtf8,
    UrlNotTerminated,
)
from .exponential import decode_exponential, encode_exponential
from .security import Coverage, SecurityProfileRegistry, default_registry, verify_stream

__all__ = [
    "URL_TERMINATOR",
    "ContinuationInfo",
    "Header",
    "TraceField",
    "encode_continuation",
    "encode_logical_body",
    "encode_header_body",
    "apply_padding",
    "padding_length",
    "strip_padding",
    "decode_continuation",
    "decode_url_section",
    "decode_logical_body",
    "decode_header",
    "covered_bits",
    "sign_header",
    "verify_header",
]

URL_TERMINATOR = 0x03
_ABSENT = "absent"
_SINGLE = "single"
_MULTI = "multi"


@dataclass(frozen=True)
class ContinuationInfo:
    sequence_number: int
    total_minus_one: int

    def __post_init__(self) -> None:
        if self.sequence_number < 0 or self.total_minus_one < 0:
            raise InvariantViolation("continuation numbers must be non-negative")
        if self.sequence_number > self.total_minus_one:
            raise InvariantViolation(
                f"sequence number {self.sequence_number} exceeds last index "
                f"{self.total_minus_one}"
            )

    @property
    def total(self) -> int:
        return self.total_minus_one + 1


SINGLE_FRAGMENT = ContinuationInfo(0, 0)


@dataclass(frozen=True)
class Header:
    """Decoded QRscript header.

    ``continuation`` is None when the stream carried the one-bit "no
    continuation" form, and ``ContinuationInfo(0, 0)`` for the explicit
    single-fragment form.  Both describe a complete program; use
    :meth:`normalized` to compare headers by meaning rather than by bits.
    """

    continuation: Optional[ContinuationInfo] = None
    security_profile: int = 0
    signature: BitString = field(default_factory=BitString)
    url: Optional[str] = None
    dialect_id: int = 0
    dialect_version: int = 0

    def validate(self) -> None:
        if self.security_profile < 0:
            raise InvariantViolation("security profile must be non-negative")
        if self.security_profile == 0 and len(self.signature):
            raise InvariantViolation("profile 0 carries no signature")
        if self.dialect_id < 0 or self.dialect_version < 0:
            raise InvariantViolation("dialect id and version must be non-negative")
        if self.url is not None:
            _url_bytes(self.url)

    @property
    def continuation_form(self) -> str:
        if self.continuation is None:
            return _ABSENT
        if self.continuation == SINGLE_FRAGMENT:
            return _SINGLE
        return _MULTI

    @property
    def is_single_program(self) -> bool:
        return self.continuation_form != _MULTI

    def normalized(self) -> "Header":
        if self.continuation_form == _SINGLE:
            return replace(self, continuation=None)
        return self


class TraceField(NamedTuple):
    """One decoded field: name, bit span in the stream, and decoded value."""

    name: str
    start: int
    end: int
    value: object


def _url_bytes(url: str) -> bytes:
    try:
        data = url.encode("utf-8")
    except UnicodeEncodeError as exc:
        raise InvalidUrl(f"URL is not encodable as UTF-8: {exc}") from None
    if URL_TERMINATOR in data:
        raise InvalidUrl("URL contains the terminator byte 0x03")
    return data


def encode_continuation(continuation: Optional[ContinuationInfo]) -> BitString:
    if continuation is None:
        return BitString("0")
    return BitString.join(
        [
            BitString("1"),
            encode_exponential(continuation.sequence_number),
            encode_exponential(continuation.total_minus_one),
        ]
    )


def _encode_url(url: Optional[str]) -> BitString:
    if url is None:
        return BitString("0")
    data = _url_bytes(url)
    return BitString("1") + from_bytes(data + bytes([URL_TERMINATOR]))


def _sections(header: Header) -> Tuple[BitString, BitString, BitString, BitString]:
    header.validate()
    profile = encode_exponential(header.security_profile)
    after_signature = _encode_url(header.url) + encode_exponential(
        header.dialect_id
    ) + encode_exponential(header.dialect_version)
    return encode_continuation(header.continuation), profile, header.signature, after_signature


def encode_logical_body(header: Header, dialect_code: BitString) -> BitString:
    """Security, URL and dialect sections plus the dialect code.

    This is the part a continuation splits across fragments; the header's
    own ``continuation`` field is ignored.
    """
    _, profile, signature, rest = _sections(header)
    return BitString.join([profile, signature, rest, dialect_code])


def encode_header_body(header: Header, dialect_code: BitString) -> BitString:
    """Every section except the padding marker, followed by the dialect code."""
    continuation, profile, signature, rest = _sections(header)
    return BitString.join([continuation, profile, signature, rest, dialect_code])


def padding_length(body_length: int) -> int:
    """Zero bits needed so that marker plus body fill whole bytes."""
    return -(1 + body_length) % 8


def apply_padding(body: BitString) -> BitString:
    k = padding_length(len(body))
    return BitString.from_int(1, k + 1) + body


def strip_padding(stream: BitString) -> BitCursor:
    """Cursor just past the padding marker.

    The number of padding zeros skipped is ``cursor.position - 1``.
    """
    first = stream.first_one()
    if first is None:
        raise AllZeros("stream has no padding marker (no 1 bit)")
    return BitCursor(stream, first + 1)


def _trace(trace: Optional[List[TraceField]], name: str, start: int, cursor: BitCursor, value) -> None:
    if trace is not None:
        trace.append(TraceField(name, start, cursor.position, value))


def decode_continuation(
    cursor: BitCursor, trace: Optional[List[TraceField]] = None
) -> Optional[ContinuationInfo]:
    start = cursor.position
    flag = cursor.read(1)
    _trace(trace, "continuation.flag", start, cursor, flag)
    if not flag:
        return None
    start = cursor.position
    seq = decode_exponential(cursor)
    _trace(trace, "continuation.sequence_number", start, cursor, seq)
    start = cursor.position
    last = decode_exponential(cursor)
    _trace(trace, "continuation.total_minus_one", start, cursor, last)
    if seq > last:
        raise BadContinuation(f"sequence number {seq} exceeds last fragment index {last}")
    return ContinuationInfo(seq, last)


def decode_url_section(
    cursor: BitCursor, trace: Optional[List[TraceField]] = None
) -> Optional[str]:
    start = cursor.position
    flag = cursor.read(1)
    _trace(trace, "url.flag", start, cursor, flag)
    if not flag:
        return None
    start = cursor.position
    data = bytearray()
    while True:
        if cursor.remaining < 8:
            raise UrlNotTerminated(
                f"stream ended after {len(data)} URL bytes without terminator 0x03"
            )
        byte = cursor.read(8)
        if byte == URL_TERMINATOR:
            break
        data.append(byte)
    try:
        url = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedUtf8(f"URL bytes are not valid UTF-8: {exc}") from None
    _trace(trace, "url.text", start, cursor, url)
    return url


def decode_logical_body(
    source: BitString | BitCursor,
    registry: Optional[SecurityProfileRegistry] = None,
    trace: Optional[List[TraceField]] = None,
) -> Tuple[Header, BitString]:
    """Decode security, URL and dialect sections; the rest is dialect code.

    The returned header has no continuation.
    """
    if registry is None:
        registry = default_registry()
    cursor = source if isinstance(source, BitCursor) else BitCursor(source)

    start = cursor.position
    profile = decode_exponential(cursor)
    _trace(trace, "security.profile", start, cursor, profile)
    sig_len = registry.signature_length_of(profile)
    start = cursor.position
    signature = cursor.read_bitstring(sig_len)
    if sig_len:
        _trace(trace, "security.signature", start, cursor, signature)

    url = decode_url_section(cursor, trace)

    start = cursor.position
    dialect_id = decode_exponential(cursor)
    _trace(trace, "dialect.id", start, cursor, dialect_id)
    start = cursor.position
    dialect_version = decode_exponential(cursor)
    _trace(trace, "dialect.version", start, cursor, dialect_version)

    start = cursor.position
    code = cursor.rest()
    _trace(trace, "dialect_code", start, cursor, code)
    header = Header(
        continuation=None,
        security_profile=profile,
        signature=signature,
        url=url,
        dialect_id=dialect_id,
        dialect_version=dialect_version,
    )
    return header, code


def decode_header(
    stream: BitString,
    registry: Optional[SecurityProfileRegistry] = None,
    trace: Optional[List[TraceField]] = None,
) -> Tuple[Header, BitString]:
    """Decode a complete eQRbytecode stream into its header and dialect code."""
    cursor = strip_padding(stream)
    if trace is not None:
        trace.append(TraceField("padding", 0, cursor.position, cursor.position - 1))
    continuation = decode_continuation(cursor, trace)
    header, code = decode_logical_body(cursor, registry, trace)
    return replace(header, continuation=continuation), code


def covered_bits(header: Header, dialect_code: BitString, coverage: Coverage) -> BitString:
    """Bits a signature protects: everything after the padding marker except
    the signature itself, optionally leaving the continuation section out."""
    continuation, profile, _, rest = _sections(header)
    parts = [profile, rest, dialect_code]
    if coverage is Coverage.WHOLE_STREAM:
        parts.insert(0, continuation)
    return BitString.join(parts)


def sign_header(
    header: Header, dialect_code: BitString, registry: SecurityProfileRegistry
) -> Header:
    """Return ``header`` with its signature computed by the profile's signer."""
    if header.security_profile == 0:
        return replace(header, signature=BitString())
    descriptor = registry.get(header.security_profile)
    unsigned = replace(header, signature=BitString())
    covered = covered_bits(unsigned, dialect_code, descriptor.coverage)
    return replace(header, signature=descriptor.sign(covered))


def verify_header(
    header: Header, dialect_code: BitString, registry: SecurityProfileRegistry
) -> bool:
    if header.security_profile == 0:
        return True
    descriptor = registry.get(header.security_profile)
    covered = covered_bits(header, dialect_code, descriptor.coverage)
    return verify_stream(registry, header, covered)
