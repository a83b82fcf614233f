"""Acceptance suite: one test per release criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines interleaved with pytest's own output.
"""

import functools
import subprocess
import sys
import time
from collections import Counter
from pathlib import Path

from lacklab.detect import detect_report, indicator_fixed_delay, indicator_ooo, indicator_prefix
from lacklab.features import (
    ARRIVAL_INDEX,
    JITTER,
    OUT_OF_ORDER,
    PACKET_SIZE,
    PAYLOAD_TYPE,
    SEQ,
    SEQ_DIFF,
    SSRC,
    interarrival_jitter,
    out_of_order_flags,
    payload_bytes,
    seq_diff_series,
)
from lacklab.lack import LackConfig, MODE_CIPHERED, lack_embed, lack_extract
from lacklab.pcap import demux_rtp, read_pcap, write_pcap
from lacklab.pointcloud import build_point_cloud, cloud_to_json
from lacklab.rtp import RtpPacket, RtpStream
from lacklab.synth import G711, JitterModel, stream_to_frames, synth_stream
from lacklab.windows import WindowConfig, slice_windows

from conftest import FULL_SECRET, stream_from_seqs
from test_features import closed_form_jitter, random_stream, resimulated_non_unit_diffs

GOLDEN_PATH = Path(__file__).parent / "data" / "steg_cloud.golden.json"


def criterion(name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"FAIL  {name}")
                raise
            print(f"PASS  {name}")

        return wrapper

    return decorate


def whole_window(stream):
    return slice_windows(stream, WindowConfig("whole"))[0]


@criterion("round-trip channel: 1000-byte secret, defaults, exact, < 1 s")
def test_round_trip_channel():
    secret = bytes((i * 7 + 1) % 256 for i in range(1000))
    carrier = synth_stream(G711, 60.0, JitterModel(), seed=42)
    cfg = LackConfig()  # delay 0.5 s, frequency 5
    start = time.perf_counter()
    steg, log = lack_embed(carrier, cfg, secret)
    recovered = lack_extract(steg, cfg, buffer=0.2)
    elapsed = time.perf_counter() - start
    assert recovered == secret
    assert log.embedded_bytes == 1000
    assert elapsed < 1.0, f"round trip took {elapsed:.3f} s"


@criterion("steg fraction: ooo_ratio == 1/f exactly for f in {2, 5, 10, 20}")
def test_steg_fraction_exact(clean_g711):
    for freq in (2, 5, 10, 20):
        steg, log = lack_embed(clean_g711, LackConfig(frequency=freq), FULL_SECRET)
        flagged = sum(out_of_order_flags(steg))
        assert flagged == len(log.entries)
        assert flagged * freq == 3000
        assert indicator_ooo(whole_window(steg)) == 1 / freq


@criterion("detection: steg suspicious at f=5/f=20, jittery clean calls clean, 50 trials each")
def test_detection_paper_consistent():
    false_negatives = 0
    for freq in (5, 20):
        for seed in range(50):
            carrier = synth_stream(G711, 60.0, seed=seed)
            steg, _ = lack_embed(carrier, LackConfig(frequency=freq), FULL_SECRET)
            if detect_report(steg).verdict != "suspicious":
                false_negatives += 1
    false_positives = 0
    for sigma in (0.001, 0.005, 0.020):
        for seed in range(50):
            clean = synth_stream(G711, 60.0, JitterModel("gaussian", sigma, seed=seed), seed=seed)
            if detect_report(clean).verdict != "clean":
                false_positives += 1
    assert false_negatives == 0, f"{false_negatives} steg calls slipped through"
    assert false_positives == 0, f"{false_positives} clean calls misflagged"


@criterion("prefix signature: plaintext count == steg packets; ciphered fires fixed_delay only")
def test_prefix_signature(plaintext_steg, ciphered_steg_f20):
    steg, log = plaintext_steg
    share, count = indicator_prefix(whole_window(steg))
    assert count == len(log.entries)
    assert share == 1.0

    ciphered, _, _ = ciphered_steg_f20
    report = detect_report(ciphered)
    fired = set(report.windows[0].fired_indicators)
    assert "prefix" not in fired
    assert "fixed_delay" in fired
    assert report.verdict == "suspicious"


@criterion("seq-diff structure: hand case exact, steg counts match brute-force re-simulation")
def test_seq_diff_structure(clean_g711):
    assert seq_diff_series(stream_from_seqs([1, 2, 4, 5, 3, 6])) == [1, 2, 1, -2, 3]
    for freq in (2, 5, 10, 20):
        steg, _ = lack_embed(clean_g711, LackConfig(frequency=freq), FULL_SECRET)
        got = sum(1 for d in seq_diff_series(steg) if d != 1)
        assert got == resimulated_non_unit_diffs(3000, G711.ptime, freq, 0.5)


@criterion("jitter: matches independent RFC 3550 evaluation on 100 streams, zero when periodic")
def test_jitter_against_independent_evaluation():
    import random as _random

    rng = _random.Random(7)
    for _ in range(100):
        stream = random_stream(rng, n=30)
        got = interarrival_jitter(stream, clock_rate=8000)
        want = closed_form_jitter(stream, clock_rate=8000)
        assert len(got) == len(want)
        assert all(abs(a - b) <= 1e-9 for a, b in zip(got, want))
    periodic = RtpStream(
        ssrc=1,
        packets=[RtpPacket(i, i * 0.015625, i, i * 128, 1, 0, b"\x00" * 16, 80) for i in range(100)],
    )
    assert interarrival_jitter(periodic, clock_rate=8192) == [0.0] * 100


@criterion("point clouds: multiplicity conserved on every fixture/axis triple, golden bytes stable")
def test_point_cloud_conservation(clean_g711, plaintext_steg, ciphered_steg_f20):
    jittery = synth_stream(G711, 20.0, JitterModel("gaussian", 0.005, seed=2), seed=2)
    fixtures = [clean_g711, plaintext_steg[0], ciphered_steg_f20[0], jittery]
    triples = [
        (ARRIVAL_INDEX, SEQ, PAYLOAD_TYPE),
        (SEQ_DIFF, PACKET_SIZE, payload_bytes()),
        (JITTER, OUT_OF_ORDER, SSRC),
    ]
    for stream in fixtures:
        for axes in triples:
            for wcfg in (WindowConfig("whole"), WindowConfig("packets", 700, 350)):
                for window in slice_windows(stream, wcfg):
                    cloud = build_point_cloud(window, axes)
                    assert sum(p.multiplicity for p in cloud.points) == len(window)

    steg, _ = plaintext_steg
    cloud = build_point_cloud(whole_window(steg), (SEQ_DIFF, PACKET_SIZE, payload_bytes()))
    assert cloud_to_json(cloud) == GOLDEN_PATH.read_bytes()


@criterion("capture round trip: multisets exact through pcap, g711 frames all 217 bytes")
def test_capture_round_trip(plaintext_steg):
    steg, _ = plaintext_steg
    frames = stream_to_frames(steg)
    assert {len(f.link_bytes) for f in frames} == {217}
    result = demux_rtp(read_pcap(write_pcap(frames)))
    got = result.single_stream()
    assert Counter(p.seq for p in got.packets) == Counter(p.seq for p in steg.packets)
    assert Counter(p.payload for p in got.packets) == Counter(p.payload for p in steg.packets)
    assert Counter(p.frame_len for p in got.packets) == Counter(p.frame_len for p in steg.packets)
    assert {p.frame_len for p in got.packets} == {217}


@criterion("CLI end to end: synth + embed -> detect exits 3, clean input exits 0")
def test_cli_end_to_end(tmp_path):
    secret = tmp_path / "msg.bin"
    secret.write_bytes(FULL_SECRET[:100_000])
    clean = tmp_path / "clean.pcap"
    steg = tmp_path / "steg.pcap"

    def run(*argv):
        return subprocess.run(
            [sys.executable, "-m", "lacklab.cli", *argv], capture_output=True, text=True
        )

    assert run("synth", "--codec", "g711", "--duration", "60", "--seed", "42",
               "-o", str(clean)).returncode == 0
    assert run("embed", "-i", str(clean), "--delay", "0.5", "--freq", "5",
               "--mode", "plaintext", "--secret", str(secret), "-o", str(steg)).returncode == 0
    assert run("detect", "-i", str(steg)).returncode == 3
    assert run("detect", "-i", str(clean)).returncode == 0
