"""Splitting a program across several eQR codes and putting it back together.

Each fragment stream is ``padding + 1 + exp(seq) + exp(N - 1) + slice``.
Only the padding marker and continuation section repeat; the logical body
(security, URL, dialect sections and dialect code) is sliced, so those
sections appear once, at the start of fragment 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from .bitstream import BitString
from .errors import DuplicateConflict, FragmentTooSmall, Incomplete, NoContinuation, TotalMismatch
from .exponential import exponential_length
from .header import ContinuationInfo, apply_padding, decode_continuation, encode_continuation, strip_padding

__all__ = [
    "Fragment",
    "AssemblyState",
    "Progress",
    "split",
    "parse_fragment",
    "feed",
    "assemble",
]


@dataclass(frozen=True)
class Fragment:
    sequence_number: int
    total_minus_one: int
    payload: BitString

    def __post_init__(self) -> None:
        # reuses ContinuationInfo's range checks
        ContinuationInfo(self.sequence_number, self.total_minus_one)

    def stream(self, align: bool = True) -> BitString:
        body = encode_continuation(ContinuationInfo(self.sequence_number, self.total_minus_one)) + self.payload
        return apply_padding(body) if align else BitString("1") + body


@dataclass(frozen=True)
class Progress:
    total: Optional[int]
    received: FrozenSet[int]
    missing: FrozenSet[int]

    @property
    def complete(self) -> bool:
        return self.total is not None and not self.missing


def _capacity(budget: int, seq: int, last: int) -> int:
    # marker bit + continuation flag + two exponential fields
    return budget - 2 - exponential_length(seq) - exponential_length(last)


def split(logical_body: BitString, max_fragment_bits: int, align: bool = True) -> List[BitString]:
    """Cut ``logical_body`` into complete fragment streams of at most
    ``max_fragment_bits`` each.

    With ``align`` (binary mode) every stream is padded to whole bytes, so
    only ``max_fragment_bits`` rounded down to a byte multiple is usable.
    Fragments are filled greedily with the fewest fragments that fit; the
    last one may be shorter.
    """
    budget = max_fragment_bits - max_fragment_bits % 8 if align else max_fragment_bits
    length = len(logical_body)
    count = 1
    used_by_seq = exponential_length(0)
    while True:
        last = count - 1
        last_len = exponential_length(last)
        smallest = budget - 2 - 2 * last_len
        if smallest < min(1, length):
            raise FragmentTooSmall(
                f"{length}-bit body does not fit {max_fragment_bits}-bit fragments: "
                f"with {count} fragments the last one needs {budget - smallest} bits "
                "of overhead before its first payload bit"
            )
        # sum over seq < count of (budget - 2 - len(exp(seq)) - len(exp(last)))
        if count * (budget - 2 - last_len) - used_by_seq >= length:
            break
        count += 1
        used_by_seq += exponential_length(count - 1)

    last = count - 1
    streams = []
    offset = 0
    for seq in range(count):
        take = min(_capacity(budget, seq, last), length - offset)
        piece = logical_body[offset:offset + take]
        offset += take
        streams.append(Fragment(seq, last, piece).stream(align))
    assert offset == length
    return streams


def parse_fragment(stream: BitString) -> Fragment:
    cursor = strip_padding(stream)
    continuation = decode_continuation(cursor)
    if continuation is None:
        raise NoContinuation("stream has continuation bit 0: it is a complete program")
    return Fragment(continuation.sequence_number, continuation.total_minus_one, cursor.rest())


@dataclass(frozen=True)
class AssemblyState:
    """Fragments received so far.  Treated as a value: :func:`feed` returns
    a new state rather than changing this one."""

    expected_total: Optional[int] = None
    received: Dict[int, BitString] = field(default_factory=dict)

    def progress(self) -> Progress:
        received = frozenset(self.received)
        if self.expected_total is None:
            return Progress(None, received, frozenset())
        return Progress(
            self.expected_total, received, frozenset(range(self.expected_total)) - received
        )

    def feed(self, stream: BitString) -> Tuple["AssemblyState", Progress]:
        return feed(self, stream)

    def merge(self, other: "AssemblyState") -> "AssemblyState":
        state = self
        for seq, payload in sorted(other.received.items()):
            state = state._add(Fragment(seq, other.expected_total - 1, payload))
        return state

    def _add(self, fragment: Fragment) -> "AssemblyState":
        total = fragment.total_minus_one + 1
        if self.expected_total is not None and total != self.expected_total:
            raise TotalMismatch(
                f"fragment {fragment.sequence_number} declares {total} fragments, "
                f"earlier ones declared {self.expected_total}"
            )
        known = self.received.get(fragment.sequence_number)
        if known is not None:
            if known != fragment.payload:
                raise DuplicateConflict(
                    f"fragment {fragment.sequence_number} was already received "
                    "with a different payload"
                )
            return self
        received = dict(self.received)
        received[fragment.sequence_number] = fragment.payload
        return AssemblyState(total, received)


def feed(state: AssemblyState, scanned_stream: BitString) -> Tuple[AssemblyState, Progress]:
    new_state = state._add(parse_fragment(scanned_stream))
    return new_state, new_state.progress()


def assemble(state: AssemblyState) -> BitString:
    progress = state.progress()
    if progress.total is None:
        raise Incomplete(frozenset({0}))
    if progress.missing:
        raise Incomplete(progress.missing)
    return BitString.join(state.received[seq] for seq in range(progress.total))
