"""Bit-exact codec for QRscript eQRbytecode: header, exponential integers,
fragmentation, and binary/numeric QR payloads."""

__version__ = "0.1.0"

from .bitstream import BitCursor, BitString, from_bytes, read_bits, to_bytes, write_bits
from .dialects import DialectEntry, DialectRegistry, Recognition, lookup_dialect
from .errors import *  # noqa: F401,F403
from .exponential import ExpEncodingParams, decode_exponential, encode_exponential
from .fragment import AssemblyState, Fragment, Progress, assemble, feed, split
from .header import (
    ContinuationInfo,
    Header,
    apply_padding,
    covered_bits,
    decode_header,
    decode_logical_body,
    decode_url_section,
    encode_header_body,
    encode_logical_body,
    sign_header,
    strip_padding,
    verify_header,
)
from .payload import (
    Mode,
    Payload,
    capacity_check,
    decode_payload,
    encode_program,
    from_numeric_payload,
    to_binary_payload,
    to_numeric_payload,
)
from .security import (
    Coverage,
    SecurityProfileDescriptor,
    SecurityProfileRegistry,
    default_registry,
    register_profile,
    signature_length_of,
    verify_stream,
)
