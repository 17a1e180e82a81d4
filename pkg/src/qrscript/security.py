"""Security profile registry.

A profile id of 0 means no security.  Ids 1-12 are reserved for future
standard profiles; applications register their own from 13 upwards.  A
registered descriptor tells the decoder how many signature bits follow the
profile field, and optionally how to sign and verify the covered bits.

Profile 13 ships as a test profile: an 8-bit XOR checksum of the covered
bits.  It is not cryptography; it exists so the envelope can be exercised.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Dict, Optional

from .bitstream import BitString
from .errors import DuplicateProfile, InvariantViolation, ReservedProfile, UnknownProfile

__all__ = [
    "Coverage",
    "SecurityProfileDescriptor",
    "SecurityProfileRegistry",
    "RESERVED_PROFILES",
    "TEST_PROFILE_ID",
    "register_profile",
    "signature_length_of",
    "verify_stream",
    "xor_checksum",
    "test_profile",
    "default_registry",
]

RESERVED_PROFILES = range(1, 13)
TEST_PROFILE_ID = 13

Signer = Callable[[BitString], BitString]
Verifier = Callable[[BitString, BitString], bool]


class Coverage(enum.Enum):
    WHOLE_STREAM = "whole_stream"
    EXCLUDE_CONTINUATION = "exclude_continuation"


@dataclass(frozen=True)
class SecurityProfileDescriptor:
    """One registry entry.

    ``signer`` and ``verifier`` may be left out for profiles whose layout is
    known but whose algorithm is not available locally; such streams still
    decode, they just cannot be signed or checked.
    """

    profile_id: int
    signature_length: int
    coverage: Coverage = Coverage.WHOLE_STREAM
    signer: Optional[Signer] = None
    verifier: Optional[Verifier] = None
    name: str = ""

    def __post_init__(self) -> None:
        if self.profile_id <= 0:
            raise InvariantViolation("profile id 0 means 'no security' and cannot be registered")
        if self.signature_length < 0:
            raise InvariantViolation("signature length must be non-negative")

    def sign(self, covered: BitString) -> BitString:
        if self.signer is None:
            raise InvariantViolation(f"profile {self.profile_id} has no signer")
        signature = self.signer(covered)
        if len(signature) != self.signature_length:
            raise InvariantViolation(
                f"profile {self.profile_id} signer produced {len(signature)} bits, "
                f"expected {self.signature_length}"
            )
        return signature


@dataclass
class SecurityProfileRegistry:
    entries: Dict[int, SecurityProfileDescriptor] = field(default_factory=dict)
    frozen: bool = False

    def register(
        self, descriptor: SecurityProfileDescriptor, allow_reserved: bool = False
    ) -> "SecurityProfileRegistry":
        if self.frozen:
            raise RuntimeError("registry is frozen")
        pid = descriptor.profile_id
        if pid in RESERVED_PROFILES and not allow_reserved:
            raise ReservedProfile(f"profile ids 1-12 are reserved, got {pid}")
        if pid in self.entries:
            raise DuplicateProfile(f"profile {pid} is already registered")
        self.entries[pid] = descriptor
        return self

    def freeze(self) -> "SecurityProfileRegistry":
        self.frozen = True
        return self

    def get(self, profile_id: int) -> SecurityProfileDescriptor:
        try:
            return self.entries[profile_id]
        except KeyError:
            raise UnknownProfile(f"security profile {profile_id} is not registered") from None

    def __contains__(self, profile_id: int) -> bool:
        return profile_id in self.entries

    def signature_length_of(self, profile_id: int) -> int:
        if profile_id == 0:
            return 0
        return self.get(profile_id).signature_length


def register_profile(
    registry: SecurityProfileRegistry,
    descriptor: SecurityProfileDescriptor,
    allow_reserved: bool = False,
) -> SecurityProfileRegistry:
    return registry.register(descriptor, allow_reserved=allow_reserved)


def signature_length_of(registry: SecurityProfileRegistry, profile_id: int) -> int:
    return registry.signature_length_of(profile_id)


def verify_stream(registry: SecurityProfileRegistry, header, covered_bits: BitString) -> bool:
    """Check ``header.signature`` over ``covered_bits``.

    Profile 0 always verifies.  ``covered_bits`` must already be selected
    according to the profile's coverage (see :func:`qrscript.header.covered_bits`).
    """
    if header.security_profile == 0:
        return True
    descriptor = registry.get(header.security_profile)
    if descriptor.verifier is None:
        raise InvariantViolation(f"profile {descriptor.profile_id} has no verifier")
    if len(header.signature) != descriptor.signature_length:
        return False
    return bool(descriptor.verifier(covered_bits, header.signature))


def xor_checksum(bits: BitString) -> BitString:
    """XOR of all bytes of ``bits``, tail zero-filled to a byte boundary."""
    fill = -len(bits) % 8
    padded = bits + BitString.from_int(0, fill)
    data = padded.value.to_bytes(len(padded) // 8, "big")
    return BitString.from_int(reduce(lambda a, b: a ^ b, data, 0), 8)


def test_profile(
    profile_id: int = TEST_PROFILE_ID, coverage: Coverage = Coverage.WHOLE_STREAM
) -> SecurityProfileDescriptor:
    return SecurityProfileDescriptor(
        profile_id=profile_id,
        signature_length=8,
        coverage=coverage,
        signer=xor_checksum,
        verifier=lambda covered, signature: xor_checksum(covered) == signature,
        name="xor8",
    )


test_profile.__test__ = False  # keep pytest from collecting it


def default_registry() -> SecurityProfileRegistry:
    """A fresh registry holding only the built-in test profile."""
    return SecurityProfileRegistry().register(test_profile())
