import struct

import numpy as np
import pytest

from abcomm.aggregation import Aggregator, local_aggregate
from abcomm.errors import MalformedFrame
from abcomm.wire import (
    AbcResponse,
    ReqMessage,
    StdResponse,
    abc_frame_bytes,
    decode_frame,
    encode_frame,
    partial_entry,
    req_frame_bytes,
    std_frame_bytes,
    _f32_tuple,
)


def test_req_round_trip():
    msg = ReqMessage(sender=1, receiver=0, ids=(1, 2, 3))
    data = encode_frame(msg)
    assert len(data) == req_frame_bytes(3)
    assert decode_frame(data, 4) == msg


def test_abc_mean_count_survives():
    part = local_aggregate(Aggregator("mean", 3), [[1, 2, 3], [4, 5, 6]])
    msg = AbcResponse(sender=0, receiver=1, agg_kind="mean", entries=(partial_entry(9, part),))
    data = encode_frame(msg)
    assert len(data) == abc_frame_bytes(1, 3, "mean")
    decoded = decode_frame(data, 3)
    assert decoded == msg
    assert decoded.entries[0][2] == 2


def test_std_round_trip():
    rng = np.random.default_rng(3)
    entries = tuple((k, _f32_tuple(rng.uniform(-1, 1, 5))) for k in range(4))
    msg = StdResponse(sender=2, receiver=7, entries=entries)
    data = encode_frame(msg)
    assert len(data) == std_frame_bytes(4, 5)
    assert decode_frame(data, 5) == msg


def test_truncation_by_one_byte():
    data = encode_frame(ReqMessage(sender=0, receiver=1, ids=(5,)))
    with pytest.raises(MalformedFrame):
        decode_frame(data[:-1], 4)


def test_every_prefix_is_malformed():
    part = local_aggregate(Aggregator("sum", 2), [[0.5, -0.5]])
    data = encode_frame(
        AbcResponse(sender=3, receiver=4, agg_kind="sum", entries=(partial_entry(1, part),))
    )
    for cut in range(len(data)):
        with pytest.raises(MalformedFrame):
            decode_frame(data[:cut], 2)


def test_trailing_garbage_rejected():
    data = encode_frame(ReqMessage(sender=0, receiver=1, ids=()))
    with pytest.raises(MalformedFrame):
        decode_frame(data + b"\x00", 4)


def _corrupt(data: bytes, offset: int, value: int) -> bytes:
    out = bytearray(data)
    out[offset] = value
    return bytes(out)


def test_bad_header_fields():
    data = encode_frame(ReqMessage(sender=0, receiver=1, ids=(5,)))
    with pytest.raises(MalformedFrame):
        decode_frame(_corrupt(data, 4, 9), 4)  # version
    with pytest.raises(MalformedFrame):
        decode_frame(_corrupt(data, 5, 7), 4)  # msg type
    with pytest.raises(MalformedFrame):
        decode_frame(_corrupt(data, 6, 0), 4)  # aggregator code on a REQ
    with pytest.raises(MalformedFrame):
        decode_frame(_corrupt(data, 7, 1), 4)  # reserved byte


def test_entry_count_length_mismatch():
    data = encode_frame(ReqMessage(sender=0, receiver=1, ids=(5, 6)))
    bad = bytearray(data)
    bad[12:16] = struct.pack("<I", 3)  # claims 3 entries, carries 2
    with pytest.raises(MalformedFrame):
        decode_frame(bytes(bad), 4)


def test_random_frames_round_trip():
    rng = np.random.default_rng(17)
    for _ in range(150):
        d = int(rng.integers(1, 9))
        kind = ("sum", "mean", "max", "min")[int(rng.integers(4))]
        which = int(rng.integers(3))
        sender, receiver = (int(x) for x in rng.integers(0, 2**16, 2))
        n_entries = int(rng.integers(0, 6))
        if which == 0:
            msg = ReqMessage(sender, receiver, tuple(int(x) for x in rng.integers(0, 2**32, n_entries)))
        elif which == 1:
            entries = tuple(
                (int(rng.integers(2**32)), _f32_tuple(rng.uniform(-5, 5, d)))
                for _ in range(n_entries)
            )
            msg = StdResponse(sender, receiver, entries)
        else:
            entries = tuple(
                (
                    int(rng.integers(2**32)),
                    _f32_tuple(rng.uniform(-5, 5, d)),
                    int(rng.integers(2**32)) if kind == "mean" else None,
                )
                for _ in range(n_entries)
            )
            msg = AbcResponse(sender, receiver, kind, entries)
        data = encode_frame(msg)
        assert decode_frame(data, d) == msg
