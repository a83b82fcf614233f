"""LACK covert channel: delay selected voice packets and replace their payload.

The transmitter picks every f-th sufficiently large packet, substitutes the
payload with the next secret chunk, and holds the packet back by a fixed
delay before sending.  A receiver that is in on the scheme treats packets
arriving too late for its jitter buffer as covert carriers and harvests
them; everyone else discards them as lost.

The fixed delay and the periodic selection are reproduced faithfully here,
including the telltales they leave in the traffic (constant lateness, a
repeated payload prefix in plaintext mode).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .errors import ChunkTooLarge, FramingError, NoEligiblePackets, SecretTooLarge
from .features import lateness_series
from .rtp import RtpStream

MODE_PLAINTEXT = "plaintext_tunnel"
MODE_CIPHERED = "ciphered"

# Fixed 4-byte marker put in front of every plaintext-tunnel chunk; stands in
# for the repeated protocol header bytes a tunneled stack would produce.
DEFAULT_TUNNEL_MAGIC = b"TNL0"

_LEN_FIELD = 2  # big-endian chunk length inside each framed payload


@dataclass(frozen=True)
class LackConfig:
    """Channel parameters shared by transmitter and receiver."""

    delay: float = 0.5
    frequency: int = 5
    size_threshold: int = 100
    payload_mode: str = MODE_PLAINTEXT
    tunnel_magic: bytes = DEFAULT_TUNNEL_MAGIC
    seed: int = 0

    def __post_init__(self) -> None:
        if self.delay <= 0:
            raise ValueError(f"delay must be positive, got {self.delay}")
        if self.frequency < 1:
            raise ValueError(f"frequency must be >= 1, got {self.frequency}")
        if self.payload_mode not in (MODE_PLAINTEXT, MODE_CIPHERED):
            raise ValueError(f"unknown payload_mode {self.payload_mode!r}")
        if len(self.tunnel_magic) != 4:
            raise ValueError("tunnel_magic must be exactly 4 bytes")


@dataclass(frozen=True)
class EmbedEntry:
    arrival_index: int  # position in the original (send-order) stream
    seq: int
    applied_delay: float
    chunk_start: int
    chunk_end: int


@dataclass
class EmbedLog:
    """Ground-truth record of one embedding run, ordered by original index."""

    entries: list[EmbedEntry] = field(default_factory=list)

    @property
    def embedded_bytes(self) -> int:
        return sum(e.chunk_end - e.chunk_start for e in self.entries)

    def original_indices(self) -> set[int]:
        return {e.arrival_index for e in self.entries}


def chunk_capacity(payload_len: int, mode: str) -> int:
    """Secret bytes one packet of the given payload size can carry."""
    overhead = _LEN_FIELD + (4 if mode == MODE_PLAINTEXT else 0)
    return payload_len - overhead


def frame_payload(
    chunk: bytes, mode: str, payload_len: int, magic: bytes, rng: random.Random
) -> bytes:
    """Wrap a secret chunk into a payload_len-sized covert payload.

    plaintext_tunnel: magic | chunk length | chunk | zero padding — every
    covert payload shares the same first 4 bytes.  ciphered: length, chunk
    and padding XOR-combined with the next payload_len bytes of the seeded
    pad stream, leaving nothing repeatable at prefix granularity.
    """
    capacity = chunk_capacity(payload_len, mode)
    if len(chunk) > capacity:
        raise ChunkTooLarge(f"chunk of {len(chunk)} bytes exceeds capacity {capacity}")
    target = payload_len - (4 if mode == MODE_PLAINTEXT else 0)
    body = len(chunk).to_bytes(_LEN_FIELD, "big") + chunk
    body += b"\x00" * (target - len(body))
    if mode == MODE_PLAINTEXT:
        return magic + body
    pad = rng.randbytes(payload_len)
    return bytes(a ^ b for a, b in zip(body, pad))


def unframe_payload(payload: bytes, mode: str, magic: bytes, rng: random.Random) -> bytes:
    """Invert frame_payload; raises FramingError on anything malformed."""
    if mode == MODE_PLAINTEXT:
        if payload[:4] != magic:
            raise FramingError(f"payload prefix {payload[:4]!r} is not the tunnel magic")
        body = payload[4:]
    else:
        pad = rng.randbytes(len(payload))
        body = bytes(a ^ b for a, b in zip(payload, pad))
    if len(body) < _LEN_FIELD:
        raise FramingError("payload too short for a chunk length field")
    length = int.from_bytes(body[:_LEN_FIELD], "big")
    if length > len(body) - _LEN_FIELD:
        raise FramingError(f"chunk length {length} exceeds framed payload")
    return body[_LEN_FIELD : _LEN_FIELD + length]


def lack_embed(
    stream: RtpStream, cfg: LackConfig, secret: bytes, strict: bool = False
) -> tuple[RtpStream, EmbedLog]:
    """Embed secret bytes into a send-order stream; returns the new stream + log.

    Every cfg.frequency-th eligible packet (frame_len > size_threshold,
    counting from the first eligible one) carries the next chunk and is
    delayed by exactly cfg.delay; the stream is then re-sorted by the new
    arrival times with arrival_index reassigned.  Embedding stops when the
    secret runs out; a secret beyond capacity is truncated unless strict,
    in which case SecretTooLarge is raised.
    """
    if not secret:
        raise ValueError("secret must be non-empty")
    eligible = [
        p
        for p in stream.packets
        if p.frame_len > cfg.size_threshold and chunk_capacity(len(p.payload), cfg.payload_mode) >= 1
    ]
    if not eligible:
        raise NoEligiblePackets(
            f"no packet larger than {cfg.size_threshold} bytes can carry a chunk"
        )
    selected = {p.arrival_index for e, p in enumerate(eligible) if e % cfg.frequency == 0}

    rng = random.Random(cfg.seed)
    log = EmbedLog()
    pos = 0
    out = []
    for pkt in stream.packets:
        if pkt.arrival_index in selected and pos < len(secret):
            chunk = secret[pos : pos + chunk_capacity(len(pkt.payload), cfg.payload_mode)]
            payload = frame_payload(chunk, cfg.payload_mode, len(pkt.payload), cfg.tunnel_magic, rng)
            out.append(replace(pkt, payload=payload, arrival_time=pkt.arrival_time + cfg.delay))
            log.entries.append(
                EmbedEntry(pkt.arrival_index, pkt.seq, cfg.delay, pos, pos + len(chunk))
            )
            pos += len(chunk)
        else:
            out.append(pkt)
    if strict and pos < len(secret):
        raise SecretTooLarge(f"carrier holds {pos} of {len(secret)} secret bytes")

    out.sort(key=lambda p: p.arrival_time)  # stable: ties keep send order
    resorted = [replace(p, arrival_index=i) for i, p in enumerate(out)]
    return RtpStream(ssrc=stream.ssrc, packets=resorted), log


def lack_extract(stream: RtpStream, cfg: LackConfig, buffer: float) -> bytes:
    """Recover the secret from packets arriving later than the jitter buffer.

    Packets whose inferred lateness exceeds `buffer` are taken as covert, in
    arrival order, de-framed per cfg.payload_mode and concatenated.  The
    buffer must be smaller than the channel delay, otherwise the covert
    packets would be played out as ordinary voice.
    """
    if buffer >= cfg.delay:
        raise ValueError(f"jitter buffer {buffer} must be smaller than the channel delay {cfg.delay}")
    rng = random.Random(cfg.seed)
    secret = bytearray()
    for pkt, late in zip(stream.packets, lateness_series(stream)):
        if late > buffer:
            secret += unframe_payload(pkt.payload, cfg.payload_mode, cfg.tunnel_magic, rng)
    return bytes(secret)
