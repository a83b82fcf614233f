import pytest
from hypothesis import given
from hypothesis import strategies as st

from lacklab.rtp import RtpPacket, seq_delta, unwrap_seq, validate_stream

from conftest import stream_from_seqs


def test_seq_delta_consecutive():
    assert seq_delta(5, 6) == 1


def test_seq_delta_wraparound():
    assert seq_delta(65535, 0) == 1


def test_seq_delta_reordering():
    assert seq_delta(10, 5) == -5


def test_seq_delta_halfway_pinned():
    assert seq_delta(0, 32768) == -32768
    assert seq_delta(32768, 0) == -32768


@given(st.integers(0, 65535))
def test_seq_delta_self_is_zero(a):
    assert seq_delta(a, a) == 0


@given(st.integers(0, 65535), st.integers(0, 65535))
def test_seq_delta_antisymmetric_except_halfway(a, b):
    d = seq_delta(a, b)
    if d == -32768:
        assert seq_delta(b, a) == -32768
    else:
        assert seq_delta(b, a) == -d


@given(st.integers(0, 65535), st.integers(-32768, 32767))
def test_seq_delta_recovers_offset(a, k):
    assert seq_delta(a, (a + k) % 65536) == k


def test_validate_stream_well_formed():
    assert validate_stream(stream_from_seqs([1, 2, 3])) == []


def test_validate_stream_decreasing_arrival_time():
    stream = stream_from_seqs([1, 2, 3])
    bad = RtpPacket(
        arrival_index=2,
        arrival_time=0.01,  # earlier than packet 1
        seq=3,
        rtp_timestamp=480,
        ssrc=stream.ssrc,
        payload_type=0,
        payload=b"\x00" * 16,
        frame_len=80,
    )
    stream.packets[2] = bad
    violations = validate_stream(stream)
    assert len(violations) == 1
    assert "packet 2" in violations[0] and "arrival_time" in violations[0]


def test_validate_stream_mixed_ssrc():
    stream = stream_from_seqs([1, 2, 3])
    stream.ssrc = 99
    violations = validate_stream(stream)
    assert violations and all("ssrc" in v for v in violations)


def test_validate_stream_sparse_indices():
    stream = stream_from_seqs([1, 2])
    stream.packets = [stream.packets[0], stream.packets[1].__class__(
        arrival_index=5,
        arrival_time=0.02,
        seq=2,
        rtp_timestamp=320,
        ssrc=7,
        payload_type=0,
        payload=b"\x00" * 16,
        frame_len=80,
    )]
    assert any("arrival_index" in v for v in validate_stream(stream))


def test_packet_invariants_rejected():
    with pytest.raises(ValueError):
        RtpPacket(0, 0.0, 70000, 0, 1, 0, b"", 12)
    with pytest.raises(ValueError):
        RtpPacket(0, 0.0, 1, 0, 1, 128, b"", 12)
    with pytest.raises(ValueError):
        RtpPacket(0, 0.0, 1, 0, 1, 0, b"\x00" * 10, 12)  # frame_len < payload + header


def test_unwrap_seq_across_wrap():
    stream = stream_from_seqs([65534, 65535, 0, 1])
    assert unwrap_seq(stream) == [65534, 65535, 65536, 65537]
