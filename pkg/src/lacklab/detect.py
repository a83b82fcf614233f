"""Thresholded covert-channel indicators and per-window verdicts.

Four indicators capture the traces a fixed-delay periodic covert channel
leaves behind: the out-of-order fraction, the spread of the late packets'
extra delay, payload-prefix repetition among late packets, and a size bias
of the late packets.  Reordering alone proves only an anomaly, so a window
is called suspicious only when the out-of-order indicator fires together
with at least one corroborating indicator.
"""

from __future__ import annotations

import statistics
from collections import Counter
from dataclasses import dataclass, field

from .errors import EmptyStream
from .features import DEFAULT_OFFSETS, lateness_series, out_of_order_flags, pack_prefix
from .pointcloud import canonical_json
from .rtp import RtpStream
from .windows import ObservationWindow, WindowConfig, slice_windows

IND_OOO = "ooo"
IND_FIXED_DELAY = "fixed_delay"
IND_PREFIX = "prefix"
IND_SIZE_BIAS = "size_bias"

VERDICT_CLEAN = "clean"
VERDICT_SUSPICIOUS = "suspicious"

REPORT_VERSION = 1


@dataclass(frozen=True)
class DetectThresholds:
    """Firing thresholds; defaults are engineering choices, all recorded in reports."""

    max_ooo_ratio: float = 0.01
    max_delay_cv: float = 0.1
    min_prefix_share: float = 0.5
    min_prefix_count: int = 10
    size_bias_margin: float = 0.0

    def __post_init__(self) -> None:
        if min(self.max_ooo_ratio, self.max_delay_cv, self.min_prefix_share,
               self.min_prefix_count, self.size_bias_margin) < 0:
            raise ValueError("thresholds must be non-negative")
        if self.max_ooo_ratio > 1 or self.min_prefix_share > 1:
            raise ValueError("ratio thresholds must lie in [0, 1]")


def indicator_ooo(window: ObservationWindow) -> float:
    """Fraction of the window's packets flagged out of order."""
    flags = out_of_order_flags(window.stream)[window.start : window.end]
    return sum(flags) / len(flags)


def indicator_fixed_delay(window: ObservationWindow) -> float | None:
    """Coefficient of variation of inferred lateness over out-of-order packets.

    A channel that always delays by the same configured value shows a CV
    near zero.  None when fewer than two late packets exist (or their mean
    lateness is not positive), since spread is then meaningless.
    """
    flags = out_of_order_flags(window.stream)[window.start : window.end]
    lateness = lateness_series(window.stream)[window.start : window.end]
    late = [l for l, f in zip(lateness, flags) if f]
    if len(late) < 2:
        return None
    mean = statistics.fmean(late)
    if mean <= 0:
        return None
    return statistics.pstdev(late) / mean


def indicator_prefix(
    window: ObservationWindow, offsets: tuple[int, ...] = DEFAULT_OFFSETS
) -> tuple[float, int]:
    """(share, count) of the dominant payload prefix among out-of-order packets."""
    flags = out_of_order_flags(window.stream)[window.start : window.end]
    late = [p for p, f in zip(window.packets, flags) if f]
    if not late:
        return 0.0, 0
    counts = Counter(pack_prefix(p.payload, offsets) for p in late)
    top = max(counts.values())
    return top / len(late), top


def indicator_size_bias(window: ObservationWindow) -> float:
    """Minimum out-of-order frame size minus the window's median frame size.

    Positive when the late packets are drawn only from the large end of the
    size distribution; zero (and uninformative) for constant-size codecs.
    """
    flags = out_of_order_flags(window.stream)[window.start : window.end]
    late_sizes = [p.frame_len for p, f in zip(window.packets, flags) if f]
    if not late_sizes:
        return 0.0
    return min(late_sizes) - statistics.median(p.frame_len for p in window.packets)


@dataclass(frozen=True)
class WindowReport:
    window: int
    packets: int
    ooo_ratio: float
    delay_cv: float | None
    top_prefix_share_among_ooo: float
    top_prefix_count_among_ooo: int
    size_bias: float
    fired_indicators: tuple[str, ...]
    verdict: str


@dataclass
class DetectionReport:
    ssrc: int
    verdict: str
    thresholds: DetectThresholds
    offsets: tuple[int, ...]
    windows: list[WindowReport] = field(default_factory=list)


def detect_report(
    stream: RtpStream,
    wcfg: WindowConfig = WindowConfig(),
    th: DetectThresholds = DetectThresholds(),
    offsets: tuple[int, ...] = DEFAULT_OFFSETS,
) -> DetectionReport:
    """Evaluate every window and reduce to a stream verdict.

    A window is suspicious iff the out-of-order indicator fires together
    with at least one of fixed_delay, prefix, or size_bias; the stream is
    suspicious iff any window is.
    """
    if len(stream) == 0:
        raise EmptyStream("cannot run detection on an empty stream")
    report = DetectionReport(
        ssrc=stream.ssrc, verdict=VERDICT_CLEAN, thresholds=th, offsets=tuple(offsets)
    )
    for window in slice_windows(stream, wcfg):
        ooo_ratio = indicator_ooo(window)
        delay_cv = indicator_fixed_delay(window)
        prefix_share, prefix_count = indicator_prefix(window, offsets)
        size_bias = indicator_size_bias(window)
        sizes_vary = len({p.frame_len for p in window.packets}) > 1

        fired = []
        if ooo_ratio > th.max_ooo_ratio:
            fired.append(IND_OOO)
        if delay_cv is not None and delay_cv < th.max_delay_cv:
            fired.append(IND_FIXED_DELAY)
        if prefix_share >= th.min_prefix_share and prefix_count >= th.min_prefix_count:
            fired.append(IND_PREFIX)
        if size_bias > th.size_bias_margin and sizes_vary:
            fired.append(IND_SIZE_BIAS)

        suspicious = IND_OOO in fired and len(fired) >= 2
        verdict = VERDICT_SUSPICIOUS if suspicious else VERDICT_CLEAN
        if suspicious:
            report.verdict = VERDICT_SUSPICIOUS
        report.windows.append(
            WindowReport(
                window=window.label,
                packets=len(window),
                ooo_ratio=ooo_ratio,
                delay_cv=delay_cv,
                top_prefix_share_among_ooo=prefix_share,
                top_prefix_count_among_ooo=prefix_count,
                size_bias=size_bias,
                fired_indicators=tuple(fired),
                verdict=verdict,
            )
        )
    return report


def report_to_dict(report: DetectionReport) -> dict:
    return {
        "v": REPORT_VERSION,
        "ssrc": report.ssrc,
        "verdict": report.verdict,
        "thresholds": {
            "max_ooo_ratio": report.thresholds.max_ooo_ratio,
            "max_delay_cv": report.thresholds.max_delay_cv,
            "min_prefix_share": report.thresholds.min_prefix_share,
            "min_prefix_count": report.thresholds.min_prefix_count,
            "size_bias_margin": report.thresholds.size_bias_margin,
        },
        "offsets": list(report.offsets),
        "windows": [
            {
                "window": w.window,
                "packets": w.packets,
                "ooo_ratio": w.ooo_ratio,
                "delay_cv": w.delay_cv,
                "top_prefix_share_among_ooo": w.top_prefix_share_among_ooo,
                "top_prefix_count_among_ooo": w.top_prefix_count_among_ooo,
                "size_bias": w.size_bias,
                "fired_indicators": list(w.fired_indicators),
                "verdict": w.verdict,
            }
            for w in report.windows
        ],
    }


def report_to_json(report: DetectionReport) -> bytes:
    return canonical_json(report_to_dict(report))
