import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from qrscript.bitstream import BitString
from qrscript.errors import DuplicateConflict, FragmentTooSmall, Incomplete, NoContinuation, TotalMismatch
from qrscript.exponential import exponential_length as el
from qrscript.fragment import AssemblyState, Fragment, assemble, feed, parse_fragment, split
from qrscript.header import Header, apply_padding, decode_logical_body, encode_header_body, encode_logical_body, strip_padding

BODY16 = BitString("1010101111001101")


def continuation_bits(stream):
    cursor = strip_padding(stream)
    start = cursor.position
    fragment = parse_fragment(stream)
    return str(stream[start:len(stream) - len(fragment.payload)])


def test_split_two_fragments():
    streams = split(BODY16, 24)
    assert len(streams) == 2
    assert [continuation_bits(s) for s in streams] == ["100000001", "100010001"]
    assert all(len(s) <= 24 and len(s) % 8 == 0 for s in streams)


def test_split_single_fragment():
    streams = split(BODY16, 1000)
    assert len(streams) == 1
    assert continuation_bits(streams[0]) == "100000000"
    assert parse_fragment(streams[0]).payload == BODY16


def test_split_too_small():
    with pytest.raises(FragmentTooSmall):
        split(BODY16, 8)
    with pytest.raises(FragmentTooSmall):
        split(BODY16, 10, align=False)


def test_split_unaligned_budget():
    for stream in split(BODY16, 13, align=False):
        assert len(stream) <= 13
        assert stream[0] == 1


def test_twenty_fragments_use_extension():
    # total_minus_one = 19 = 15 + 4 needs the first extension field
    fragments = [Fragment(seq, 19, BitString("1") if seq % 2 else BitString("0")) for seq in range(20)]
    streams = [f.stream() for f in fragments]
    assert str(strip_padding(streams[0]).rest()).startswith("1" + "0000" + "1111" + "0100")
    assert str(strip_padding(streams[17]).rest()).startswith("1" + "1111" + "0010" + "1111" + "0100")
    state = AssemblyState()
    for s in reversed(streams):
        state, _ = feed(state, s)
    assert assemble(state) == BitString("01" * 10)


def test_split_beyond_fifteen_fragments():
    # 15 fragments of a 24-bit budget carry 210 bits; 220 needs the 8-bit total
    body = BitString("10" * 110)
    streams = split(body, 24)
    assert len(streams) > 16
    assert {parse_fragment(s).total_minus_one for s in streams} == {len(streams) - 1}
    state = AssemblyState()
    for s in random.Random(3).sample(streams, len(streams)):
        state, _ = feed(state, s)
    assert assemble(state) == body


def test_feed_progress():
    streams = split(BitString("1" * 30), 24)
    assert len(streams) == 3
    state, progress = feed(AssemblyState(), streams[1])
    assert progress.missing == {0, 2}
    assert progress.total == 3
    assert not progress.complete


def test_duplicate_is_idempotent():
    streams = split(BitString("1" * 30), 24)
    state, _ = feed(AssemblyState(), streams[0])
    again, progress = feed(state, streams[0])
    assert again == state
    assert progress.missing == {1, 2}


def test_duplicate_conflict():
    a = Fragment(0, 1, BitString("1")).stream()
    b = Fragment(0, 1, BitString("0")).stream()
    state, _ = feed(AssemblyState(), a)
    with pytest.raises(DuplicateConflict):
        feed(state, b)


def test_total_mismatch():
    state, _ = feed(AssemblyState(), Fragment(0, 2, BitString("1")).stream())
    with pytest.raises(TotalMismatch):
        feed(state, Fragment(0, 1, BitString("1")).stream())


def test_no_continuation():
    stream = apply_padding(encode_header_body(Header(), BitString()))
    with pytest.raises(NoContinuation):
        feed(AssemblyState(), stream)


def test_incomplete():
    streams = split(BitString("1" * 30), 24)
    state = AssemblyState()
    for s in streams[:1] + streams[2:]:
        state, _ = feed(state, s)
    with pytest.raises(Incomplete) as info:
        assemble(state)
    assert info.value.missing == {1}
    with pytest.raises(Incomplete):
        assemble(AssemblyState())


def test_single_explicit_fragment_assembles():
    stream = Fragment(0, 0, BitString("0110")).stream()
    state, progress = feed(AssemblyState(), stream)
    assert progress.complete
    assert assemble(state) == BitString("0110")


def test_merge():
    streams = split(BitString("10" * 40), 32)
    left = right = AssemblyState()
    for i, s in enumerate(streams):
        if i % 2:
            left, _ = feed(left, s)
        else:
            right, _ = feed(right, s)
    assert assemble(left.merge(right)) == BitString("10" * 40)


def test_program_through_fragments():
    header = Header(security_profile=0, url="https://frag.example", dialect_id=3)
    code = BitString("1100" * 50)
    streams = split(encode_logical_body(header, code), 64)
    state = AssemblyState()
    for s in random.Random(1).sample(streams, len(streams)):
        state, _ = feed(state, s)
    assert decode_logical_body(assemble(state)) == (header, code)


@settings(max_examples=150)
@given(
    st.text(alphabet="01", min_size=1, max_size=600).map(BitString),
    st.integers(16, 200),
    st.booleans(),
    st.randoms(use_true_random=False),
)
def test_roundtrip_any_order(body, budget, align, rnd):
    streams = split(body, budget, align=align)
    for s in streams:
        assert len(s) <= budget
        if align:
            assert len(s) % 8 == 0
    order = list(streams)
    rnd.shuffle(order)
    state = AssemblyState()
    for s in order:
        state, _ = feed(state, s)
    assert assemble(state) == body


def test_fewest_fragments():
    # no smaller count would fit: check against brute force over counts
    rng = random.Random(7)
    for _ in range(200):
        body = BitString("1" * rng.randint(1, 400))
        budget = rng.randint(16, 120)
        usable = budget - budget % 8

        def fits(count):
            caps = [usable - 2 - el(s) - el(count - 1) for s in range(count)]
            return min(caps) >= 1 and sum(caps) >= len(body)

        try:
            n = len(split(body, budget))
        except FragmentTooSmall:
            assert not any(fits(c) for c in range(1, len(body) + 1))
            continue
        assert fits(n)
        assert not any(fits(c) for c in range(1, n))
