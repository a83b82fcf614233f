"""Read-only HTTP API over loaded captures, for the analyst workbench.

Serves stream listings, per-window point clouds, and detection reports.
All analysis artifacts are produced by CLI runs; nothing mutates over HTTP.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import HTMLResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .detect import DetectThresholds, detect_report, report_to_json
from .features import DEFAULT_OFFSETS, kind_from_name
from .pcap import read_pcap, demux_rtp
from .pointcloud import build_point_cloud, cloud_to_json
from .rtp import RtpStream
from .windows import MODE_PACKETS, MODE_WHOLE, WindowConfig, slice_windows


class StreamInfo(BaseModel):
    ssrc: int
    packets: int
    payload_type: int


class CaptureInfo(BaseModel):
    id: str
    path: str
    streams: list[StreamInfo]


class LoadedCapture:
    """One parsed pcap: streams by ssrc (first stream wins a duplicate ssrc)."""

    def __init__(self, capture_id: str, path: str, streams: dict[int, RtpStream]):
        self.id = capture_id
        self.path = path
        self.streams = streams

    @classmethod
    def from_file(cls, capture_id: str, path: Path) -> "LoadedCapture":
        result = demux_rtp(read_pcap(path.read_bytes()))
        streams: dict[int, RtpStream] = {}
        for (_flow, ssrc), stream in result.streams.items():
            streams.setdefault(ssrc, stream)
        return cls(capture_id, str(path), streams)

    def info(self) -> CaptureInfo:
        return CaptureInfo(
            id=self.id,
            path=self.path,
            streams=[
                StreamInfo(
                    ssrc=ssrc,
                    packets=len(stream),
                    payload_type=stream.packets[0].payload_type if stream.packets else 0,
                )
                for ssrc, stream in sorted(self.streams.items())
            ],
        )


FALLBACK_PAGE = """<!doctype html>
<html><head><title>lacklab</title></head>
<body>
<h1>lacklab API</h1>
<p>No workbench assets configured (start with --static DIR to serve them).</p>
<p>Data endpoints: <a href="/api/captures">/api/captures</a>,
/api/captures/{id}/streams/{ssrc}/pointcloud, /api/captures/{id}/streams/{ssrc}/report</p>
</body></html>
"""


def load_captures(paths: list[Path]) -> dict[str, LoadedCapture]:
    captures: dict[str, LoadedCapture] = {}
    for path in paths:
        capture_id = path.stem
        suffix = 2
        while capture_id in captures:
            capture_id = f"{path.stem}-{suffix}"
            suffix += 1
        captures[capture_id] = LoadedCapture.from_file(capture_id, path)
    return captures


def create_app(captures: dict[str, LoadedCapture], static_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="lacklab", version="0.1.0")

    def get_stream(capture_id: str, ssrc: int) -> RtpStream:
        capture = captures.get(capture_id)
        if capture is None:
            raise HTTPException(status_code=404, detail=f"unknown capture {capture_id!r}")
        stream = capture.streams.get(ssrc)
        if stream is None:
            raise HTTPException(status_code=404, detail=f"capture has no stream with ssrc {ssrc}")
        return stream

    def window_config(wsize: int | None, wstride: int | None) -> WindowConfig:
        if wsize is None:
            return WindowConfig(MODE_WHOLE)
        return WindowConfig(MODE_PACKETS, size=wsize, stride=wstride or wsize)

    @app.get("/api/captures", response_model=list[CaptureInfo])
    def list_captures() -> list[CaptureInfo]:
        return [captures[cid].info() for cid in sorted(captures)]

    @app.get("/api/captures/{capture_id}/streams/{ssrc}/pointcloud")
    def pointcloud(
        capture_id: str,
        ssrc: int,
        x: str = Query("arrival"),
        y: str = Query("seq"),
        z: str = Query("ptype"),
        win: int = Query(0, ge=0),
        wsize: int | None = Query(None, gt=0),
        wstride: int | None = Query(None, gt=0),
    ) -> Response:
        stream = get_stream(capture_id, ssrc)
        try:
            axes = (kind_from_name(x), kind_from_name(y), kind_from_name(z))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        windows = slice_windows(stream, window_config(wsize, wstride))
        if win >= len(windows):
            raise HTTPException(
                status_code=400, detail=f"window {win} out of range, stream has {len(windows)}"
            )
        cloud = build_point_cloud(windows[win], axes)
        return Response(content=cloud_to_json(cloud), media_type="application/json")

    @app.get("/api/captures/{capture_id}/streams/{ssrc}/report")
    def report(
        capture_id: str,
        ssrc: int,
        wsize: int | None = Query(None, gt=0),
        wstride: int | None = Query(None, gt=0),
        offsets: str = Query(",".join(str(o) for o in DEFAULT_OFFSETS)),
        max_ooo_ratio: float = Query(DetectThresholds.max_ooo_ratio),
        max_delay_cv: float = Query(DetectThresholds.max_delay_cv),
        min_prefix_share: float = Query(DetectThresholds.min_prefix_share),
        min_prefix_count: int = Query(DetectThresholds.min_prefix_count),
        size_bias_margin: float = Query(DetectThresholds.size_bias_margin),
    ) -> Response:
        stream = get_stream(capture_id, ssrc)
        try:
            offs = tuple(int(o) for o in offsets.split(","))
            th = DetectThresholds(
                max_ooo_ratio=max_ooo_ratio,
                max_delay_cv=max_delay_cv,
                min_prefix_share=min_prefix_share,
                min_prefix_count=min_prefix_count,
                size_bias_margin=size_bias_margin,
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        result = detect_report(stream, window_config(wsize, wstride), th, offs)
        return Response(content=report_to_json(result), media_type="application/json")

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="workbench")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index() -> str:
            return FALLBACK_PAGE

    return app
