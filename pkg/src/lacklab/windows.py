"""Observation windows: whole-connection, packet-count, or duration slices."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyStream
from .rtp import RtpPacket, RtpStream

MODE_WHOLE = "whole"
MODE_PACKETS = "packets"
MODE_DURATION = "duration"


@dataclass(frozen=True)
class WindowConfig:
    """How a stream is sliced into observation windows.

    whole: one window over the full connection.  packets: windows of `size`
    packets starting every `stride` packets.  duration: the same over
    arrival_time in seconds.  stride <= size overlaps; stride == size tiles.
    """

    mode: str = MODE_WHOLE
    size: float = 0
    stride: float = 0

    def __post_init__(self) -> None:
        if self.mode == MODE_WHOLE:
            return
        if self.mode not in (MODE_PACKETS, MODE_DURATION):
            raise ValueError(f"unknown window mode {self.mode!r}")
        if self.size <= 0 or self.stride <= 0:
            raise ValueError("window size and stride must be positive")


@dataclass(frozen=True)
class ObservationWindow:
    """A half-open arrival_index range [start, end) of one stream."""

    stream: RtpStream
    start: int
    end: int
    label: int
    partial: bool = False

    @property
    def packets(self) -> list[RtpPacket]:
        return self.stream.packets[self.start : self.end]

    def __len__(self) -> int:
        return self.end - self.start


def slice_windows(stream: RtpStream, cfg: WindowConfig = WindowConfig()) -> list[ObservationWindow]:
    """Slice a stream per the window config.

    Trailing partial windows are kept and flagged; dropping them could hide
    embedding near the end of a call.  Duration slots containing no packet
    produce no window.
    """
    n = len(stream)
    if n == 0:
        raise EmptyStream("cannot window an empty stream")

    if cfg.mode == MODE_WHOLE:
        return [ObservationWindow(stream, 0, n, 0)]

    windows = []
    if cfg.mode == MODE_PACKETS:
        size, stride = int(cfg.size), int(cfg.stride)
        start = 0
        while start < n:
            end = min(start + size, n)
            windows.append(
                ObservationWindow(stream, start, end, len(windows), partial=end - start < size)
            )
            start += stride
        return windows

    # Duration boundaries work in whole microseconds (the capture format's
    # native precision) so that stride == size tiles without float seams.
    times = [round(p.arrival_time * 1_000_000) for p in stream.packets]
    size = max(round(cfg.size * 1_000_000), 1)
    stride = max(round(cfg.stride * 1_000_000), 1)
    t0, t_last = times[0], times[-1]
    k = 0
    while t0 + k * stride <= t_last:
        lo = t0 + k * stride
        hi = lo + size
        start = _first_at_or_after(times, lo)
        end = _first_at_or_after(times, hi)
        if end > start:
            windows.append(
                ObservationWindow(stream, start, end, len(windows), partial=hi > t_last)
            )
        k += 1
    return windows


def _first_at_or_after(times: list[int], t: int) -> int:
    lo, hi = 0, len(times)
    while lo < hi:
        mid = (lo + hi) // 2
        if times[mid] < t:
            lo = mid + 1
        else:
            hi = mid
    return lo
