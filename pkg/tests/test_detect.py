import random
import statistics
from dataclasses import replace

import pytest

from lacklab.detect import (
    DetectThresholds,
    detect_report,
    indicator_fixed_delay,
    indicator_ooo,
    indicator_prefix,
    indicator_size_bias,
    report_to_dict,
)
from lacklab.errors import EmptyStream
from lacklab.lack import DEFAULT_TUNNEL_MAGIC, LackConfig, lack_embed
from lacklab.rtp import RtpPacket, RtpStream
from lacklab.synth import G711, JitterModel, synth_stream
from lacklab.windows import WindowConfig, slice_windows

from conftest import FULL_SECRET


def whole_window(stream):
    return slice_windows(stream, WindowConfig("whole"))[0]


def manual_delay(stream, delays):
    """Delay chosen packets by hand and restore arrival order bookkeeping."""
    pkts = [
        replace(p, arrival_time=p.arrival_time + delays.get(p.arrival_index, 0.0))
        for p in stream.packets
    ]
    pkts.sort(key=lambda p: p.arrival_time)
    return RtpStream(stream.ssrc, [replace(p, arrival_index=i) for i, p in enumerate(pkts)])


def bimodal_stream(n=400):
    """Alternating small (80 B) and large (300 B) frames, 60-byte payloads."""
    packets = [
        RtpPacket(i, i * 0.02, i, i * 160, 3, 0, bytes([i % 251]) * 60, 80 if i % 2 else 300)
        for i in range(n)
    ]
    return RtpStream(ssrc=3, packets=packets)


def test_ooo_ratio_clean(clean_g711):
    assert indicator_ooo(whole_window(clean_g711)) == 0.0


def test_ooo_ratio_full_capacity(plaintext_steg, ciphered_steg_f20):
    steg5, _ = plaintext_steg
    steg20, _, _ = ciphered_steg_f20
    assert indicator_ooo(whole_window(steg5)) == 0.2
    assert indicator_ooo(whole_window(steg20)) == 0.05


def test_ooo_ratio_monotone_in_frequency(clean_g711):
    ratios = []
    for freq in (2, 5, 10, 20):
        steg, _ = lack_embed(clean_g711, LackConfig(frequency=freq), FULL_SECRET)
        ratio = indicator_ooo(whole_window(steg))
        assert ratio == 1 / freq
        ratios.append(ratio)
    assert ratios == sorted(ratios, reverse=True)


def test_fixed_delay_cv_constant_delays(plaintext_steg):
    steg, _ = plaintext_steg
    cv = indicator_fixed_delay(whole_window(steg))
    assert cv == pytest.approx(0.0, abs=1e-9)


def test_fixed_delay_cv_matches_direct_computation(clean_g711):
    rng = random.Random(99)
    drawn = {idx: rng.uniform(0.1, 1.0) for idx in range(100, 1100, 100)}
    delayed = manual_delay(clean_g711, drawn)
    want = statistics.pstdev(drawn.values()) / statistics.fmean(drawn.values())
    assert indicator_fixed_delay(whole_window(delayed)) == pytest.approx(want, rel=1e-9)


def test_fixed_delay_absent_below_two_late(clean_g711):
    assert indicator_fixed_delay(whole_window(clean_g711)) is None
    one_late = manual_delay(clean_g711, {500: 0.5})
    assert indicator_fixed_delay(whole_window(one_late)) is None


def test_prefix_indicator_plaintext(plaintext_steg):
    steg, log = plaintext_steg
    share, count = indicator_prefix(whole_window(steg))
    assert share == 1.0
    assert count == len(log.entries)


def test_prefix_indicator_ciphered(ciphered_steg_f20):
    steg, _, _ = ciphered_steg_f20
    share, count = indicator_prefix(whole_window(steg))
    assert share < DetectThresholds.min_prefix_share


def test_prefix_indicator_no_late_packets(clean_g711):
    assert indicator_prefix(whole_window(clean_g711)) == (0.0, 0)


def test_size_bias_constant_sizes(plaintext_steg):
    steg, _ = plaintext_steg
    assert indicator_size_bias(whole_window(steg)) == 0


def test_size_bias_positive_when_only_large_chosen():
    steg, log = lack_embed(bimodal_stream(), LackConfig(frequency=2), FULL_SECRET)
    assert log.entries
    assert all(e.arrival_index % 2 == 0 for e in log.entries)  # only 300 B frames
    assert indicator_size_bias(whole_window(steg)) == 300 - 190


def test_size_bias_zero_without_late_packets(clean_g711):
    assert indicator_size_bias(whole_window(clean_g711)) == 0.0


def test_report_clean_jittery_call():
    stream = synth_stream(G711, 60.0, JitterModel("gaussian", 0.005, seed=12), seed=7)
    report = detect_report(stream)
    assert report.verdict == "clean"
    assert report.windows[0].fired_indicators == ()


def test_report_plaintext_defaults_suspicious(plaintext_steg):
    steg, _ = plaintext_steg
    report = detect_report(steg)
    assert report.verdict == "suspicious"
    assert set(report.windows[0].fired_indicators) == {"ooo", "fixed_delay", "prefix"}


def test_report_ciphered_f20_suspicious_without_prefix(ciphered_steg_f20):
    steg, _, _ = ciphered_steg_f20
    report = detect_report(steg)
    assert report.verdict == "suspicious"
    fired = set(report.windows[0].fired_indicators)
    assert "ooo" in fired and "fixed_delay" in fired
    assert "prefix" not in fired


def test_ooo_alone_never_suspicious(clean_g711):
    # Random per-packet delays, native payloads, constant size: only ooo fires.
    rng = random.Random(5)
    drawn = {idx: rng.uniform(0.1, 1.0) for idx in range(50, 2550, 50)}
    delayed = manual_delay(clean_g711, drawn)
    report = detect_report(delayed)
    assert report.windows[0].fired_indicators == ("ooo",)
    assert report.verdict == "clean"


def test_no_false_positives_on_clean_corpus():
    th = DetectThresholds(max_ooo_ratio=1e-9)
    for seed in range(5):
        for kind, param in (("none", 0.0), ("gaussian", 0.005), ("exponential", 0.003)):
            stream = synth_stream(G711, 10.0, JitterModel(kind, param, seed=seed), seed=seed)
            assert detect_report(stream, th=th).verdict == "clean"


def test_report_windows_cover_stream(plaintext_steg):
    steg, _ = plaintext_steg
    report = detect_report(steg, WindowConfig("packets", 1000, 1000))
    assert [w.packets for w in report.windows] == [1000, 1000, 1000]
    assert all(w.verdict == "suspicious" for w in report.windows)


def test_report_empty_stream():
    with pytest.raises(EmptyStream):
        detect_report(RtpStream(ssrc=1))


def test_report_dict_mirrors_fields(plaintext_steg):
    steg, _ = plaintext_steg
    doc = report_to_dict(detect_report(steg))
    assert doc["v"] == 1
    assert doc["verdict"] == "suspicious"
    assert doc["thresholds"]["max_ooo_ratio"] == DetectThresholds.max_ooo_ratio
    window = doc["windows"][0]
    for key in (
        "ooo_ratio",
        "delay_cv",
        "top_prefix_share_among_ooo",
        "top_prefix_count_among_ooo",
        "size_bias",
        "fired_indicators",
        "verdict",
    ):
        assert key in window


def test_bad_thresholds_rejected():
    with pytest.raises(ValueError):
        DetectThresholds(max_ooo_ratio=-0.1)
    with pytest.raises(ValueError):
        DetectThresholds(min_prefix_share=1.5)
