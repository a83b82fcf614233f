"""Core RTP domain types and wrap-aware sequence-number arithmetic."""

from __future__ import annotations

from dataclasses import dataclass, field

SEQ_MOD = 1 << 16
TS_MOD = 1 << 32
RTP_HEADER_LEN = 12


def seq_delta(a: int, b: int) -> int:
    """Signed shortest difference b - a between two 16-bit sequence numbers.

    Wraps modulo 2**16 and maps the result into [-32768, 32767]; the
    ambiguous half-way point is pinned to -32768, so seq_delta(a, a + 32768)
    is always -32768.
    """
    return ((b - a + 32768) % SEQ_MOD) - 32768


def ts_delta(a: int, b: int) -> int:
    """Signed shortest difference b - a between two 32-bit RTP timestamps."""
    return ((b - a + (TS_MOD >> 1)) % TS_MOD) - (TS_MOD >> 1)


@dataclass(frozen=True)
class RtpPacket:
    """One captured or synthesized RTP packet.

    arrival_index is the ordinal position at the capture interface and is
    the authoritative order; arrival_time ties are broken by it.  frame_len
    is the full on-wire frame size, headers included.
    """

    arrival_index: int
    arrival_time: float
    seq: int
    rtp_timestamp: int
    ssrc: int
    payload_type: int
    payload: bytes
    frame_len: int

    def __post_init__(self) -> None:
        if not 0 <= self.seq < SEQ_MOD:
            raise ValueError(f"seq {self.seq} outside [0, 65535]")
        if not 0 <= self.rtp_timestamp < TS_MOD:
            raise ValueError(f"rtp_timestamp {self.rtp_timestamp} outside 32-bit range")
        if not 0 <= self.ssrc < TS_MOD:
            raise ValueError(f"ssrc {self.ssrc} outside 32-bit range")
        if not 0 <= self.payload_type <= 127:
            raise ValueError(f"payload_type {self.payload_type} outside [0, 127]")
        if self.arrival_time < 0:
            raise ValueError(f"arrival_time {self.arrival_time} is negative")
        if self.frame_len < len(self.payload) + RTP_HEADER_LEN:
            raise ValueError(
                f"frame_len {self.frame_len} < payload ({len(self.payload)}) + RTP header"
            )


@dataclass
class RtpStream:
    """All packets of one SSRC, ordered by arrival at the capture interface."""

    ssrc: int
    packets: list[RtpPacket] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.packets)


def validate_stream(stream: RtpStream) -> list[str]:
    """Check RtpStream invariants; returns one message per violation.

    An empty list means the stream is well-formed: uniform ssrc,
    non-decreasing arrival_time, and arrival_index dense 0..n-1.
    """
    violations = []
    prev_time = 0.0
    for i, pkt in enumerate(stream.packets):
        if pkt.ssrc != stream.ssrc:
            violations.append(
                f"packet {i}: ssrc {pkt.ssrc:#010x} differs from stream ssrc {stream.ssrc:#010x}"
            )
        if pkt.arrival_index != i:
            violations.append(
                f"packet {i}: arrival_index {pkt.arrival_index} breaks dense 0..n-1 ordering"
            )
        if pkt.arrival_time < prev_time:
            violations.append(
                f"packet {i}: arrival_time {pkt.arrival_time} decreases from {prev_time}"
            )
        prev_time = pkt.arrival_time
    return violations


def unwrap_seq(stream: RtpStream) -> list[int]:
    """Unwrapped sequence numbers, cumulative wrap-aware deltas from packet 0.

    Element 0 equals the first packet's raw seq; later elements may exceed
    65535 or go negative when the 16-bit counter wraps mid-stream.
    """
    if not stream.packets:
        return []
    out = [stream.packets[0].seq]
    for prev, cur in zip(stream.packets, stream.packets[1:]):
        out.append(out[-1] + seq_delta(prev.seq, cur.seq))
    return out
