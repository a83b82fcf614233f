"""Synthetic VoIP-like RTP stream generation: codec profiles and jitter models.

Randomness comes from Python's random.Random (MT19937), seeded explicitly,
so identical inputs reproduce bit-identical streams.  Payload bits are an
implementation detail of that generator; cross-implementation comparisons
should assert structure (counts, sizes, prefixes), not bytes.
"""

from __future__ import annotations

import random
import struct
from dataclasses import dataclass

from .errors import FrameTooSmall, InvalidProfile
from .pcap import MIN_STACK_LEN, CaptureFrame, FlowKey, build_frame
from .rtp import SEQ_MOD, TS_MOD, RtpPacket, RtpStream

# Constant-rate codecs send payload_len samples every ptime at an 8 kHz-like
# clock, so rtp_timestamp advances by payload_len per packet.
PATTERN_CONSTANT = "constant"
PATTERN_CYCLED_PREFIX = "cycled_prefix"
PATTERN_RANDOM = "random"


@dataclass(frozen=True)
class PayloadPattern:
    """How packet payloads are filled.

    constant: every byte equals `value`.
    cycled_prefix: `prefix_count` distinct seeded 4-byte prefixes cycled
      packet by packet, remainder of the payload pseudo-random; clean calls
      then show a small set of heavily repeated prefixes.
    random: every byte pseudo-random.
    """

    kind: str = PATTERN_CYCLED_PREFIX
    value: int = 0
    prefix_count: int = 8


@dataclass(frozen=True)
class CodecProfile:
    """Fixed-rate codec emission profile."""

    name: str
    payload_type: int
    ptime: float
    payload_len: int
    frame_len: int
    pattern: PayloadPattern = PayloadPattern()

    def validate(self) -> None:
        if self.ptime <= 0:
            raise InvalidProfile(f"{self.name}: ptime must be positive, got {self.ptime}")
        if self.frame_len < self.payload_len + 12:
            raise InvalidProfile(
                f"{self.name}: frame_len {self.frame_len} < payload_len + RTP header"
            )
        if not 0 <= self.payload_type <= 127:
            raise InvalidProfile(f"{self.name}: payload_type {self.payload_type} out of range")


G711 = CodecProfile(name="g711", payload_type=0, ptime=0.020, payload_len=160, frame_len=217)
SPEEX = CodecProfile(name="speex", payload_type=114, ptime=0.020, payload_len=70, frame_len=124)
THEORA = CodecProfile(name="theora", payload_type=121, ptime=1 / 30, payload_len=900, frame_len=954)

PROFILES = {p.name: p for p in (G711, SPEEX, THEORA)}

JITTER_NONE = "none"
JITTER_GAUSSIAN = "gaussian"
JITTER_EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class JitterModel:
    """Per-packet network delay noise.

    Never reorders: arrival times are clamped non-decreasing in send order,
    so arrival order always equals send order.  Reordering, when wanted,
    must be applied as a separate explicit transform.
    """

    kind: str = JITTER_NONE
    param: float = 0.0  # sigma for gaussian, mean for exponential
    seed: int = 0

    def arrival_times(self, count: int, ptime: float) -> list[float]:
        rng = random.Random(self.seed)
        times = []
        prev = 0.0
        for i in range(count):
            if self.kind == JITTER_NONE:
                noise = 0.0
            elif self.kind == JITTER_GAUSSIAN:
                noise = rng.gauss(0.0, self.param)
            elif self.kind == JITTER_EXPONENTIAL:
                noise = rng.expovariate(1.0 / self.param) if self.param > 0 else 0.0
            else:
                raise ValueError(f"unknown jitter kind {self.kind!r}")
            t = max(i * ptime + noise, prev, 0.0)
            times.append(t)
            prev = t
        return times


def _prefix_table(rng: random.Random, count: int) -> list[bytes]:
    seen: set[bytes] = set()
    while len(seen) < count:
        seen.add(rng.randbytes(4))
    return sorted(seen)


def _payloads(pattern: PayloadPattern, payload_len: int, count: int, rng: random.Random):
    if pattern.kind == PATTERN_CONSTANT:
        body = bytes([pattern.value]) * payload_len
        return [body] * count
    if pattern.kind == PATTERN_RANDOM:
        return [rng.randbytes(payload_len) for _ in range(count)]
    if pattern.kind == PATTERN_CYCLED_PREFIX:
        prefixes = _prefix_table(rng, pattern.prefix_count)
        tail = max(payload_len - 4, 0)
        return [
            (prefixes[i % len(prefixes)] + rng.randbytes(tail))[:payload_len]
            for i in range(count)
        ]
    raise InvalidProfile(f"unknown payload pattern {pattern.kind!r}")


def synth_stream(
    profile: CodecProfile,
    duration: float,
    jitter: JitterModel = JitterModel(),
    ssrc: int = 0x1ACC5EED,
    seed: int = 0,
) -> RtpStream:
    """Generate floor(duration/ptime) packets of a constant-rate RTP stream.

    seq starts at a seeded random value and increments by one with 16-bit
    wrap; rtp_timestamp advances by payload_len per packet; packets are in
    send order with arrival_time = i*ptime + jitter, clamped monotone.
    """
    profile.validate()
    if duration <= 0:
        raise InvalidProfile(f"duration must be positive, got {duration}")
    count = int(duration / profile.ptime + 1e-9)
    rng = random.Random(seed)
    seq0 = rng.randrange(SEQ_MOD)
    ts0 = rng.randrange(TS_MOD)
    payloads = _payloads(profile.pattern, profile.payload_len, count, rng)
    times = jitter.arrival_times(count, profile.ptime)

    stream = RtpStream(ssrc=ssrc)
    for i in range(count):
        stream.packets.append(
            RtpPacket(
                arrival_index=i,
                arrival_time=times[i],
                seq=(seq0 + i) % SEQ_MOD,
                rtp_timestamp=(ts0 + i * profile.payload_len) % TS_MOD,
                ssrc=ssrc,
                payload_type=profile.payload_type,
                payload=payloads[i],
                frame_len=profile.frame_len,
            )
        )
    return stream


DEFAULT_FLOW = FlowKey(src_ip="10.0.0.1", dst_ip="10.0.0.2", src_port=5004, dst_port=5006)


def stream_to_frames(stream: RtpStream, flow: FlowKey = DEFAULT_FLOW) -> list[CaptureFrame]:
    """Render each packet as one Ethernet/IPv4/UDP/RTP frame of its frame_len.

    Frames shorter than the natural header stack raise FrameTooSmall; longer
    frame_len values are honored with a link-layer zero trailer.
    """
    frames = []
    for pkt in stream.packets:
        min_len = MIN_STACK_LEN + len(pkt.payload)
        if pkt.frame_len < min_len:
            raise FrameTooSmall(
                f"packet {pkt.arrival_index}: frame_len {pkt.frame_len} < minimal {min_len}"
            )
        rtp_hdr = struct.pack(
            "!BBHII", 0x80, pkt.payload_type & 0x7F, pkt.seq, pkt.rtp_timestamp, pkt.ssrc
        )
        frame = build_frame(flow, rtp_hdr + pkt.payload, pad_to=pkt.frame_len)
        frames.append(CaptureFrame(timestamp=pkt.arrival_time, link_bytes=frame))
    return frames
