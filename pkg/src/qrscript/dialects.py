"""Dialect id/version registry.

The codec never interprets dialect code; this only names what a header
points at.  QRtree (id 0) is the one dialect registered by default.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional, Tuple

__all__ = [
    "QRTREE_ID",
    "DialectEntry",
    "DialectRegistry",
    "Recognition",
    "default_dialects",
    "lookup_dialect",
]

QRTREE_ID = 0


class Recognition(enum.Enum):
    KNOWN = "known"
    KNOWN_DIALECT_UNKNOWN_VERSION = "known_dialect_unknown_version"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class DialectEntry:
    dialect_id: int
    name: str
    known_versions: FrozenSet[int] = frozenset()


@dataclass
class DialectRegistry:
    entries: Dict[int, DialectEntry] = field(default_factory=dict)

    def register(self, entry: DialectEntry) -> "DialectRegistry":
        if entry.dialect_id in self.entries:
            raise ValueError(f"dialect {entry.dialect_id} is already registered")
        self.entries[entry.dialect_id] = entry
        return self

    def lookup(self, dialect_id: int, version: int) -> Tuple[Optional[DialectEntry], Recognition]:
        entry = self.entries.get(dialect_id)
        if entry is None:
            return None, Recognition.UNKNOWN
        if version in entry.known_versions:
            return entry, Recognition.KNOWN
        return entry, Recognition.KNOWN_DIALECT_UNKNOWN_VERSION


def default_dialects() -> DialectRegistry:
    return DialectRegistry().register(DialectEntry(QRTREE_ID, "QRtree", frozenset({0})))


_DEFAULT = default_dialects()


def lookup_dialect(
    dialect_id: int, version: int, registry: Optional[DialectRegistry] = None
) -> Tuple[Optional[DialectEntry], Recognition]:
    """Name a dialect/version pair.  Never raises; unknown ids are reported."""
    return (registry or _DEFAULT).lookup(dialect_id, version)
