"""Classic pcap reading/writing and heuristic RTP demultiplexing.

Only the classic (libpcap) format is handled, not pcapng: 24-byte global
header with magic 0xa1b2c3d4 (either byte order), microsecond timestamps,
Ethernet link type.  IPv4/UDP only; fragments and anything else are skipped
and counted.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from .errors import MalformedPcap
from .rtp import RTP_HEADER_LEN, RtpPacket, RtpStream

PCAP_MAGIC = 0xA1B2C3D4
PCAP_GLOBAL_LEN = 24
PCAP_RECORD_LEN = 16

ETH_HEADER_LEN = 14
ETHERTYPE_IPV4 = 0x0800
IP_PROTO_UDP = 17
UDP_HEADER_LEN = 8

# Minimal Ethernet/IPv4/UDP/RTP stack in front of the RTP payload.
MIN_STACK_LEN = ETH_HEADER_LEN + 20 + UDP_HEADER_LEN + RTP_HEADER_LEN


@dataclass(frozen=True)
class CaptureFrame:
    """One captured link-layer frame: seconds since capture start plus raw bytes."""

    timestamp: float
    link_bytes: bytes


@dataclass(frozen=True)
class FlowKey:
    """IPv4/UDP 4-tuple identifying one direction of a flow."""

    src_ip: str
    dst_ip: str
    src_port: int
    dst_port: int

    def __post_init__(self) -> None:
        if self.src_port == 0 or self.dst_port == 0:
            raise ValueError("flow ports must be nonzero")


@dataclass
class DemuxResult:
    """RTP streams keyed by (FlowKey, ssrc), plus the count of skipped frames."""

    streams: dict[tuple[FlowKey, int], RtpStream] = field(default_factory=dict)
    skipped: int = 0

    def single_stream(self) -> RtpStream:
        if len(self.streams) != 1:
            raise ValueError(f"expected exactly one RTP stream, found {len(self.streams)}")
        return next(iter(self.streams.values()))


def write_pcap(frames: list[CaptureFrame]) -> bytes:
    """Serialize frames as a classic little-endian pcap byte string.

    Timestamps are quantized to whole microseconds.
    """
    out = bytearray()
    out += struct.pack("<IHHiIII", PCAP_MAGIC, 2, 4, 0, 0, 65535, 1)
    for frame in frames:
        sec = int(frame.timestamp)
        usec = round((frame.timestamp - sec) * 1_000_000)
        if usec >= 1_000_000:
            sec += 1
            usec -= 1_000_000
        n = len(frame.link_bytes)
        out += struct.pack("<IIII", sec, usec, n, n)
        out += frame.link_bytes
    return bytes(out)


def read_pcap(data: bytes) -> list[CaptureFrame]:
    """Parse a classic pcap byte string into frames.

    Timestamps are returned in seconds relative to the first frame.
    Raises MalformedPcap on bad magic, truncated headers, or record lengths
    that run past the end of the input.
    """
    if len(data) < PCAP_GLOBAL_LEN:
        raise MalformedPcap(f"input of {len(data)} bytes is shorter than the global header")
    magic_le = struct.unpack_from("<I", data, 0)[0]
    if magic_le == PCAP_MAGIC:
        endian = "<"
    elif struct.unpack_from(">I", data, 0)[0] == PCAP_MAGIC:
        endian = ">"
    else:
        raise MalformedPcap(f"bad magic {magic_le:#010x}")

    frames = []
    offset = PCAP_GLOBAL_LEN
    base: float | None = None
    while offset < len(data):
        if offset + PCAP_RECORD_LEN > len(data):
            raise MalformedPcap(f"truncated record header at offset {offset}")
        sec, usec, incl_len, _orig_len = struct.unpack_from(endian + "IIII", data, offset)
        offset += PCAP_RECORD_LEN
        if offset + incl_len > len(data):
            raise MalformedPcap(
                f"record at offset {offset - PCAP_RECORD_LEN} claims {incl_len} bytes, "
                f"only {len(data) - offset} remain"
            )
        ts = sec + usec / 1_000_000
        if base is None:
            base = ts
        frames.append(CaptureFrame(timestamp=ts - base, link_bytes=data[offset : offset + incl_len]))
        offset += incl_len
    return frames


def _ip_checksum(header: bytes) -> int:
    total = 0
    for i in range(0, len(header), 2):
        total += (header[i] << 8) | header[i + 1]
    while total >> 16:
        total = (total & 0xFFFF) + (total >> 16)
    return ~total & 0xFFFF


def _pack_ip(addr: str) -> bytes:
    parts = [int(p) for p in addr.split(".")]
    if len(parts) != 4 or any(not 0 <= p <= 255 for p in parts):
        raise ValueError(f"bad IPv4 address {addr!r}")
    return bytes(parts)


def _mac_for(addr: str) -> bytes:
    # Locally administered MAC derived from the IPv4 address; purely cosmetic.
    return b"\x02\x00" + _pack_ip(addr)


def build_frame(flow: FlowKey, udp_payload: bytes, pad_to: int | None = None) -> bytes:
    """Build one Ethernet/IPv4/UDP frame around udp_payload.

    pad_to, when larger than the natural frame size, appends a zero trailer
    after the UDP datagram (link-layer padding, invisible to IP).
    """
    udp_len = UDP_HEADER_LEN + len(udp_payload)
    udp = struct.pack("!HHHH", flow.src_port, flow.dst_port, udp_len, 0) + udp_payload

    total_len = 20 + len(udp)
    ip_wo_csum = struct.pack(
        "!BBHHHBBH4s4s",
        0x45, 0, total_len, 0, 0, 64, IP_PROTO_UDP, 0,
        _pack_ip(flow.src_ip), _pack_ip(flow.dst_ip),
    )
    csum = _ip_checksum(ip_wo_csum)
    ip = ip_wo_csum[:10] + struct.pack("!H", csum) + ip_wo_csum[12:]

    eth = _mac_for(flow.dst_ip) + _mac_for(flow.src_ip) + struct.pack("!H", ETHERTYPE_IPV4)
    frame = eth + ip + udp
    if pad_to is not None and pad_to > len(frame):
        frame += b"\x00" * (pad_to - len(frame))
    return frame


def parse_frame(link_bytes: bytes) -> tuple[FlowKey, bytes] | None:
    """Extract (FlowKey, UDP payload) from an Ethernet frame, or None.

    Returns None for anything that is not a clean unfragmented IPv4/UDP
    datagram; link-layer trailers past the IP total length are ignored.
    """
    if len(link_bytes) < ETH_HEADER_LEN + 20 + UDP_HEADER_LEN:
        return None
    if struct.unpack_from("!H", link_bytes, 12)[0] != ETHERTYPE_IPV4:
        return None
    ip_off = ETH_HEADER_LEN
    vihl = link_bytes[ip_off]
    if vihl >> 4 != 4:
        return None
    ihl = (vihl & 0x0F) * 4
    if ihl < 20 or len(link_bytes) < ip_off + ihl:
        return None
    total_len, flags_frag = struct.unpack_from("!HxxH", link_bytes, ip_off + 2)
    if flags_frag & 0x3FFF:  # MF set or nonzero fragment offset
        return None
    if link_bytes[ip_off + 9] != IP_PROTO_UDP:
        return None
    if total_len < ihl + UDP_HEADER_LEN or len(link_bytes) < ip_off + total_len:
        return None
    src_ip = ".".join(str(b) for b in link_bytes[ip_off + 12 : ip_off + 16])
    dst_ip = ".".join(str(b) for b in link_bytes[ip_off + 16 : ip_off + 20])

    udp_off = ip_off + ihl
    src_port, dst_port, udp_len = struct.unpack_from("!HHH", link_bytes, udp_off)
    if src_port == 0 or dst_port == 0:
        return None
    if udp_len < UDP_HEADER_LEN or udp_off + udp_len > ip_off + total_len:
        return None
    payload = link_bytes[udp_off + UDP_HEADER_LEN : udp_off + udp_len]
    return FlowKey(src_ip, dst_ip, src_port, dst_port), payload


def _parse_rtp(udp_payload: bytes) -> tuple[int, int, int, int, bytes] | None:
    """Heuristic RTP parse: (seq, rtp_timestamp, ssrc, payload_type, payload) or None."""
    if len(udp_payload) < RTP_HEADER_LEN:
        return None
    first = udp_payload[0]
    if (first >> 6) & 0x03 != 2:
        return None
    csrc_count = first & 0x0F
    payload_type = udp_payload[1] & 0x7F
    seq, ts, ssrc = struct.unpack_from("!HII", udp_payload, 2)
    header_len = RTP_HEADER_LEN + csrc_count * 4
    if len(udp_payload) < header_len:
        return None
    return seq, ts, ssrc, payload_type, udp_payload[header_len:]


def demux_rtp(frames: list[CaptureFrame]) -> DemuxResult:
    """Group RTP packets by (flow, ssrc), skipping and counting everything else.

    arrival_index is assigned per stream in frame order; arrival_time is the
    frame timestamp; frame_len is the full link-layer frame size.
    """
    result = DemuxResult()
    for frame in frames:
        parsed = parse_frame(frame.link_bytes)
        if parsed is None:
            result.skipped += 1
            continue
        flow, udp_payload = parsed
        rtp = _parse_rtp(udp_payload)
        if rtp is None:
            result.skipped += 1
            continue
        seq, ts, ssrc, payload_type, payload = rtp
        stream = result.streams.get((flow, ssrc))
        if stream is None:
            stream = RtpStream(ssrc=ssrc)
            result.streams[(flow, ssrc)] = stream
        stream.packets.append(
            RtpPacket(
                arrival_index=len(stream.packets),
                arrival_time=frame.timestamp,
                seq=seq,
                rtp_timestamp=ts,
                ssrc=ssrc,
                payload_type=payload_type,
                payload=payload,
                frame_len=len(frame.link_bytes),
            )
        )
    return result
