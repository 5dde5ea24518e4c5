"""Length-prefixed binary framing for exchange messages.

Frame layout (all integers little-endian):

    u32 payload_length ++ payload
    payload = u8 version(=1) ++ u8 msg_type ++ u8 aggregator_code
              ++ u8 reserved(=0) ++ u16 sender ++ u16 receiver
              ++ u32 entry_count ++ entries

msg_type: 0 = REQ, 1 = RESP_STD, 2 = RESP_ABC. aggregator_code: 0 sum,
1 mean, 2 max, 3 min, and 255 for frame types that carry no aggregator.
Entries: REQ -> u32 vertex id; RESP_STD -> u32 vertex id ++ d x f32;
RESP_ABC -> u32 vertex id ++ d x f32 ++ u32 count (mean only). The feature
dimension d is session configuration and never travels in the frame.

Feature payloads are held as tuples of Python floats that are exact float32
values, so encode/decode round-trips are bit-identical.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .aggregation import Partial
from .errors import InvalidParams, MalformedFrame

VERSION = 1
MSG_REQ = 0
MSG_RESP_STD = 1
MSG_RESP_ABC = 2
NO_AGGREGATOR = 255
AGG_CODES = {"sum": 0, "mean": 1, "max": 2, "min": 3}
AGG_KINDS = {code: kind for kind, code in AGG_CODES.items()}

_PREFIX = struct.Struct("<I")
_HEADER = struct.Struct("<BBBBHHI")
HEADER_BYTES = _HEADER.size  # 12
FRAME_OVERHEAD = _PREFIX.size + HEADER_BYTES


@dataclass(frozen=True)
class ReqMessage:
    sender: int
    receiver: int
    ids: tuple[int, ...]


@dataclass(frozen=True)
class StdResponse:
    sender: int
    receiver: int
    entries: tuple  # of (vertex_id, tuple-of-floats)


@dataclass(frozen=True)
class AbcResponse:
    sender: int
    receiver: int
    agg_kind: str
    entries: tuple  # of (vertex_id, tuple-of-floats, count-or-None)


def _f32_tuple(values) -> tuple[float, ...]:
    arr = np.asarray(values, dtype=np.float32)
    if not np.all(np.isfinite(arr)):
        raise InvalidParams("wire payload values must be finite")
    return tuple(float(x) for x in arr)


def partial_entry(vertex: int, part: Partial) -> tuple:
    count = part.count if part.kind == "mean" else None
    return (int(vertex), _f32_tuple(part.values), count)


def req_frame_bytes(n_ids: int) -> int:
    return FRAME_OVERHEAD + 4 * n_ids


def std_frame_bytes(n_entries: int, d: int) -> int:
    return FRAME_OVERHEAD + n_entries * (4 + 4 * d)


def abc_frame_bytes(n_entries: int, d: int, agg_kind: str) -> int:
    extra = 4 if agg_kind == "mean" else 0
    return FRAME_OVERHEAD + n_entries * (4 + 4 * d + extra)


def _check_u(value: int, bits: int, what: str) -> int:
    value = int(value)
    if not (0 <= value < (1 << bits)):
        raise InvalidParams(f"{what} {value} does not fit u{bits}")
    return value


def encode_frame(msg) -> bytes:
    """Serialize a message dataclass into one frame."""
    if isinstance(msg, ReqMessage):
        msg_type, agg_code = MSG_REQ, NO_AGGREGATOR
        body = b"".join(struct.pack("<I", _check_u(i, 32, "vertex id")) for i in msg.ids)
        count = len(msg.ids)
    elif isinstance(msg, StdResponse):
        msg_type, agg_code = MSG_RESP_STD, NO_AGGREGATOR
        parts = []
        for vertex, values in msg.entries:
            parts.append(struct.pack("<I", _check_u(vertex, 32, "vertex id")))
            parts.append(struct.pack(f"<{len(values)}f", *values))
        body = b"".join(parts)
        count = len(msg.entries)
    elif isinstance(msg, AbcResponse):
        if msg.agg_kind not in AGG_CODES:
            raise InvalidParams(f"unknown aggregator kind {msg.agg_kind!r}")
        msg_type, agg_code = MSG_RESP_ABC, AGG_CODES[msg.agg_kind]
        parts = []
        for vertex, values, part_count in msg.entries:
            parts.append(struct.pack("<I", _check_u(vertex, 32, "vertex id")))
            parts.append(struct.pack(f"<{len(values)}f", *values))
            if msg.agg_kind == "mean":
                parts.append(struct.pack("<I", _check_u(part_count, 32, "partial count")))
        body = b"".join(parts)
        count = len(msg.entries)
    else:
        raise InvalidParams(f"cannot encode {type(msg).__name__}")
    header = _HEADER.pack(
        VERSION,
        msg_type,
        agg_code,
        0,
        _check_u(msg.sender, 16, "sender"),
        _check_u(msg.receiver, 16, "receiver"),
        _check_u(count, 32, "entry count"),
    )
    payload = header + body
    return _PREFIX.pack(len(payload)) + payload


def _entry_size(msg_type: int, agg_code: int, d: int) -> int:
    if msg_type == MSG_REQ:
        return 4
    if msg_type == MSG_RESP_STD:
        return 4 + 4 * d
    return 4 + 4 * d + (4 if agg_code == AGG_CODES["mean"] else 0)


def decode_frame(data: bytes, d: int):
    """Parse one frame back into its message; d is the session feature dim."""
    if d < 1:
        raise InvalidParams(f"session dim must be >= 1, got {d}")
    if len(data) < _PREFIX.size:
        raise MalformedFrame("frame shorter than its length prefix")
    (payload_len,) = _PREFIX.unpack_from(data, 0)
    if len(data) != _PREFIX.size + payload_len:
        raise MalformedFrame(
            f"declared payload of {payload_len} bytes, frame carries {len(data) - _PREFIX.size}"
        )
    if payload_len < HEADER_BYTES:
        raise MalformedFrame("payload shorter than the fixed header")
    version, msg_type, agg_code, reserved, sender, receiver, count = _HEADER.unpack_from(
        data, _PREFIX.size
    )
    if version != VERSION:
        raise MalformedFrame(f"unsupported version {version}")
    if msg_type not in (MSG_REQ, MSG_RESP_STD, MSG_RESP_ABC):
        raise MalformedFrame(f"unknown message type {msg_type}")
    if reserved != 0:
        raise MalformedFrame(f"reserved byte is {reserved}, must be 0")
    if msg_type == MSG_RESP_ABC:
        if agg_code not in AGG_KINDS:
            raise MalformedFrame(f"unknown aggregator code {agg_code}")
    elif agg_code != NO_AGGREGATOR:
        raise MalformedFrame(f"aggregator code {agg_code} on a frame type that carries none")
    size = _entry_size(msg_type, agg_code, d)
    if payload_len != HEADER_BYTES + count * size:
        raise MalformedFrame(
            f"{count} entries of {size} bytes do not fill a payload of {payload_len}"
        )
    body = data[_PREFIX.size + HEADER_BYTES:]
    if msg_type == MSG_REQ:
        ids = tuple(struct.unpack_from("<I", body, 4 * k)[0] for k in range(count))
        return ReqMessage(sender=sender, receiver=receiver, ids=ids)
    entries = []
    off = 0
    for _ in range(count):
        (vertex,) = struct.unpack_from("<I", body, off)
        off += 4
        values = struct.unpack_from(f"<{d}f", body, off)
        off += 4 * d
        if msg_type == MSG_RESP_ABC and agg_code == AGG_CODES["mean"]:
            (part_count,) = struct.unpack_from("<I", body, off)
            off += 4
        else:
            part_count = None
        if msg_type == MSG_RESP_STD:
            entries.append((vertex, values))
        else:
            entries.append((vertex, values, part_count))
    if msg_type == MSG_RESP_STD:
        return StdResponse(sender=sender, receiver=receiver, entries=tuple(entries))
    return AbcResponse(
        sender=sender,
        receiver=receiver,
        agg_kind=AGG_KINDS[agg_code],
        entries=tuple(entries),
    )
