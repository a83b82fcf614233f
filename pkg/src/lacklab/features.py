"""Per-packet traffic parameters and the derived series built from them.

Covers the observable set a stream exposes at the receiving interface:
payload bytes, sequence number, packet size, payload type, SSRC, jitter,
plus arrival order, wrap-aware sequence differences and out-of-order flags.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import StreamTooShort
from .rtp import RtpStream, seq_delta, ts_delta, unwrap_seq

# Key used in payload-prefix histograms for packets too short for the
# requested offsets; -1 cannot collide with a packed byte value.
SHORT_PAYLOAD_KEY = -1

DEFAULT_OFFSETS = (0, 1, 2, 3)
DEFAULT_CLOCK_RATE = 8000.0


@dataclass(frozen=True)
class FeatureKind:
    """One per-packet column: a fixed name plus offsets for payload bytes."""

    name: str
    offsets: tuple[int, ...] = ()

    @property
    def label(self) -> str:
        if self.name != "payload":
            return self.name
        if self.offsets == DEFAULT_OFFSETS:
            return "payload0_3"
        return "payload" + "_".join(str(o) for o in self.offsets)


SEQ = FeatureKind("seq")
SEQ_DIFF = FeatureKind("seqdiff")
PACKET_SIZE = FeatureKind("size")
PAYLOAD_TYPE = FeatureKind("ptype")
SSRC = FeatureKind("ssrc")
JITTER = FeatureKind("jitter")
ARRIVAL_INDEX = FeatureKind("arrival")
OUT_OF_ORDER = FeatureKind("ooo")


def payload_bytes(offsets: tuple[int, ...] = DEFAULT_OFFSETS) -> FeatureKind:
    if not offsets:
        raise ValueError("payload feature needs at least one offset")
    return FeatureKind("payload", tuple(offsets))


AXIS_NAMES = ("payload0_3", "seq", "seqdiff", "size", "ptype", "ssrc", "jitter", "arrival", "ooo")


def kind_from_name(name: str) -> FeatureKind:
    """Resolve an axis name as used by the CLI and HTTP API."""
    simple = {k.label: k for k in (SEQ, SEQ_DIFF, PACKET_SIZE, PAYLOAD_TYPE, SSRC, JITTER, ARRIVAL_INDEX, OUT_OF_ORDER)}
    if name in simple:
        return simple[name]
    if name == "payload0_3":
        return payload_bytes()
    raise ValueError(f"unknown axis name {name!r}; expected one of {', '.join(AXIS_NAMES)}")


def seq_diff_series(stream: RtpStream) -> list[int]:
    """Wrap-aware seq difference between consecutive arrivals, length n-1."""
    if len(stream) < 2:
        raise StreamTooShort(f"need at least 2 packets, have {len(stream)}")
    pkts = stream.packets
    return [seq_delta(a.seq, b.seq) for a, b in zip(pkts, pkts[1:])]


def out_of_order_flags(stream: RtpStream) -> list[bool]:
    """True where a packet's unwrapped seq undercuts an earlier arrival's maximum."""
    flags = []
    running_max = None
    for u in unwrap_seq(stream):
        flags.append(running_max is not None and u < running_max)
        running_max = u if running_max is None else max(running_max, u)
    return flags


def interarrival_jitter(stream: RtpStream, clock_rate: float = DEFAULT_CLOCK_RATE) -> list[float]:
    """RFC 3550 section 6.4.1 smoothed interarrival jitter, J += (|D| - J)/16."""
    if clock_rate <= 0:
        raise ValueError(f"clock_rate must be positive, got {clock_rate}")
    pkts = stream.packets
    jitter = [0.0] * len(pkts)
    for i in range(1, len(pkts)):
        d = (pkts[i].arrival_time - pkts[i - 1].arrival_time) - (
            ts_delta(pkts[i - 1].rtp_timestamp, pkts[i].rtp_timestamp) / clock_rate
        )
        jitter[i] = jitter[i - 1] + (abs(d) - jitter[i - 1]) / 16
    return jitter


def pack_prefix(payload: bytes, offsets: tuple[int, ...]) -> int:
    """Big-endian packing of the payload bytes at `offsets` into one integer.

    Packets shorter than the largest offset map to SHORT_PAYLOAD_KEY so
    histograms stay total.
    """
    value = 0
    for off in offsets:
        if off >= len(payload):
            return SHORT_PAYLOAD_KEY
        value = (value << 8) | payload[off]
    return value


def payload_prefix_histogram(
    stream: RtpStream, offsets: tuple[int, ...] = DEFAULT_OFFSETS
) -> dict[int, int]:
    """Counts of packed payload byte tuples across the whole stream."""
    if not offsets:
        raise ValueError("offsets must be non-empty")
    counts: dict[int, int] = {}
    for pkt in stream.packets:
        key = pack_prefix(pkt.payload, offsets)
        counts[key] = counts.get(key, 0) + 1
    return counts


def lateness_series(stream: RtpStream) -> list[float]:
    """Per-packet delay versus a least-squares expected-arrival model.

    The model fits arrival_time against the unwrapped send position using
    only the in-order packets (the majority in any usable carrier), which
    makes it robust to clock offset; out-of-order packets then show their
    extra delay as a positive residual.
    """
    pkts = stream.packets
    if not pkts:
        return []
    unwrapped = unwrap_seq(stream)
    base = unwrapped[0]
    xs = [u - base for u in unwrapped]
    flags = out_of_order_flags(stream)

    fit_x = [x for x, f in zip(xs, flags) if not f]
    fit_y = [p.arrival_time for p, f in zip(pkts, flags) if not f]
    n = len(fit_x)
    mean_x = sum(fit_x) / n
    mean_y = sum(fit_y) / n
    var = sum((x - mean_x) ** 2 for x in fit_x)
    if var > 0:
        slope = sum((x - mean_x) * (y - mean_y) for x, y in zip(fit_x, fit_y)) / var
    else:
        slope = 0.0
    intercept = mean_y - slope * mean_x
    return [p.arrival_time - (intercept + slope * x) for p, x in zip(pkts, xs)]


@dataclass
class FeatureMatrix:
    """One row per packet (arrival order), one column per requested kind."""

    kinds: list[FeatureKind]
    rows: list[tuple[float, ...]]

    def column(self, i: int) -> list[float]:
        return [row[i] for row in self.rows]


def feature_matrix(
    stream: RtpStream,
    kinds: list[FeatureKind],
    clock_rate: float = DEFAULT_CLOCK_RATE,
) -> FeatureMatrix:
    """Evaluate every requested kind for every packet.

    Derived kinds follow the series definitions above; the seqdiff column
    aligns each difference to the later packet, with row 0 fixed at 0.
    """
    if not kinds:
        raise ValueError("kinds must be non-empty")
    pkts = stream.packets
    columns: list[list] = []
    for kind in kinds:
        if kind.name == "seq":
            col = [p.seq for p in pkts]
        elif kind.name == "seqdiff":
            col = [0] + [seq_delta(a.seq, b.seq) for a, b in zip(pkts, pkts[1:])]
        elif kind.name == "size":
            col = [p.frame_len for p in pkts]
        elif kind.name == "ptype":
            col = [p.payload_type for p in pkts]
        elif kind.name == "ssrc":
            col = [p.ssrc for p in pkts]
        elif kind.name == "jitter":
            col = interarrival_jitter(stream, clock_rate)
        elif kind.name == "arrival":
            col = [p.arrival_index for p in pkts]
        elif kind.name == "ooo":
            col = [int(f) for f in out_of_order_flags(stream)]
        elif kind.name == "payload":
            col = [pack_prefix(p.payload, kind.offsets) for p in pkts]
        else:
            raise ValueError(f"unknown feature kind {kind.name!r}")
        columns.append(col)
    rows = [tuple(col[i] for col in columns) for i in range(len(pkts))]
    return FeatureMatrix(kinds=list(kinds), rows=rows)
