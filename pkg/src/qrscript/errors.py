"""Exception hierarchy for the QRscript codec.

Decode-side failures derive from :class:`DecodeError`, fragmentation and
reassembly failures from :class:`FragmentError`; the CLI maps each family
to its own exit status.
"""

from __future__ import annotations


class QRScriptError(Exception):
    """Base class for every error raised by this package."""


class ValueOverflow(QRScriptError, ValueError):
    """A value does not fit in the requested bit width."""


class Misaligned(QRScriptError, ValueError):
    """A bit string was expected to hold a whole number of bytes."""


class DecodeError(QRScriptError):
    """A stream could not be decoded."""


class Underrun(DecodeError):
    """Fewer bits remain than a field requires."""


class AllZeros(DecodeError):
    """The stream has no padding marker (no 1 bit at all)."""


class UnknownProfile(DecodeError, KeyError):
    """A nonzero security profile id is not in the registry."""

    def __str__(self) -> str:
        return Exception.__str__(self)


class BadContinuation(DecodeError):
    """A continuation section names a sequence number past the last fragment."""


class UrlNotTerminated(DecodeError):
    """The stream ended before the URL terminator byte."""


class MalformedUtf8(DecodeError):
    """The URL bytes are not valid UTF-8."""


class InvalidUrl(QRScriptError, ValueError):
    """The URL cannot be carried in a header."""


class InvariantViolation(QRScriptError, ValueError):
    """A record breaks one of its structural invariants."""


class ReservedProfile(QRScriptError, ValueError):
    """Profile ids 1-12 are reserved."""


class DuplicateProfile(QRScriptError, ValueError):
    pass


class FragmentError(QRScriptError):
    """Base class for splitting and reassembly failures."""


class FragmentTooSmall(FragmentError, ValueError):
    """The per-fragment budget cannot hold the overhead plus one payload bit."""


class TotalMismatch(FragmentError):
    pass


class DuplicateConflict(FragmentError):
    pass


class NoContinuation(FragmentError):
    """The stream is a complete program, not a fragment."""


class Incomplete(FragmentError):
    """Not every fragment has been received yet."""

    def __init__(self, missing):
        self.missing = frozenset(missing)
        listed = ", ".join(str(seq) for seq in sorted(self.missing))
        super().__init__(f"missing fragments: {listed}")


class CapacityExceeded(QRScriptError, ValueError):
    """A payload is larger than the QR input mode can hold."""


class LeadingZero(QRScriptError, ValueError):
    """A numeric-mode stream would lose its leading zero bits."""


class NotANumber(QRScriptError, ValueError):
    pass


class ZeroValue(QRScriptError, ValueError):
    pass
