"""Shared fixtures: seeded carriers and steg variants used across modules."""

import pytest

from lacklab.lack import MODE_CIPHERED, LackConfig, lack_embed
from lacklab.rtp import RtpPacket, RtpStream
from lacklab.synth import G711, JitterModel, synth_stream

FULL_SECRET = bytes((i * 31 + 7) % 256 for i in range(250_000))  # beyond any fixture capacity


def stream_from_seqs(seqs, ssrc=7, ptime=0.02, frame_len=80, payload=b"\x00" * 16):
    """Hand-built stream: arrival order = list order, timestamps per send slot."""
    packets = [
        RtpPacket(
            arrival_index=i,
            arrival_time=i * ptime,
            seq=seq % 65536,
            rtp_timestamp=(seq * 160) % (1 << 32),
            ssrc=ssrc,
            payload_type=0,
            payload=payload,
            frame_len=frame_len,
        )
        for i, seq in enumerate(seqs)
    ]
    return RtpStream(ssrc=ssrc, packets=packets)


@pytest.fixture(scope="session")
def clean_g711():
    return synth_stream(G711, 60.0, JitterModel(), ssrc=0xABCD0001, seed=42)


@pytest.fixture(scope="session")
def plaintext_steg(clean_g711):
    """Full-capacity plaintext embedding at the default delay/frequency."""
    steg, log = lack_embed(clean_g711, LackConfig(), FULL_SECRET)
    return steg, log


@pytest.fixture(scope="session")
def ciphered_steg_f20(clean_g711):
    cfg = LackConfig(frequency=20, payload_mode=MODE_CIPHERED, seed=11)
    steg, log = lack_embed(clean_g711, cfg, FULL_SECRET)
    return steg, log, cfg
