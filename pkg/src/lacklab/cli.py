"""Command-line front end: synth, embed, extract, features, export, detect, serve.

Exit codes are pipeline-friendly: 0 success (detect: clean), 1 runtime
error, 2 usage error, 3 detect found the capture suspicious.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .detect import DetectThresholds, detect_report, report_to_dict
from .errors import LackLabError
from .features import DEFAULT_OFFSETS, feature_matrix, kind_from_name
from .lack import MODE_CIPHERED, MODE_PLAINTEXT, LackConfig, lack_embed, lack_extract
from .pcap import CaptureFrame, read_pcap, demux_rtp, write_pcap
from .pointcloud import build_point_cloud, canonical_json, cloud_to_dict
from .synth import PROFILES, JitterModel, stream_to_frames, synth_stream
from .windows import WindowConfig, slice_windows

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_SUSPICIOUS = 3


def _write_json(doc, dest: str | None) -> None:
    if dest is None:
        return
    data = canonical_json(doc) + b"\n"
    if dest == "-":
        sys.stdout.buffer.write(data)
    else:
        Path(dest).write_bytes(data)


def _load_streams(path: str):
    """Read a capture and return (sorted list of (flow, ssrc, stream), skipped)."""
    result = demux_rtp(read_pcap(Path(path).read_bytes()))
    entries = sorted(
        ((flow, ssrc, stream) for (flow, ssrc), stream in result.streams.items()),
        key=lambda e: (e[0].src_ip, e[0].src_port, e[0].dst_ip, e[0].dst_port, e[1]),
    )
    return entries, result.skipped


def _pick_stream(entries, ssrc: int | None):
    if ssrc is not None:
        matches = [e for e in entries if e[1] == ssrc]
        if not matches:
            raise LackLabError(f"no stream with ssrc {ssrc} in capture")
        return matches[0]
    if len(entries) != 1:
        found = ", ".join(f"{e[1]:#010x}" for e in entries)
        raise LackLabError(f"capture holds {len(entries)} streams ({found}); pick one with --ssrc")
    return entries[0]


def _jitter_from_args(args) -> JitterModel:
    return JitterModel(kind=args.jitter, param=args.jitter_param, seed=args.jitter_seed)


def _lack_config(args) -> LackConfig:
    mode = MODE_PLAINTEXT if args.mode == "plaintext" else MODE_CIPHERED
    return LackConfig(
        delay=args.delay,
        frequency=args.freq,
        size_threshold=args.size_threshold,
        payload_mode=mode,
        seed=args.seed,
    )


def _window_config(args) -> WindowConfig:
    if args.wmode == "whole":
        return WindowConfig("whole")
    return WindowConfig(args.wmode, size=args.wsize, stride=args.wstride or args.wsize)


def _add_window_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--wmode", choices=["whole", "packets", "duration"], default="whole")
    p.add_argument("--wsize", type=float, default=0, help="window size (packets or seconds)")
    p.add_argument("--wstride", type=float, default=0, help="window stride, defaults to size")


def cmd_synth(args) -> int:
    profile = PROFILES[args.codec]
    stream = synth_stream(profile, args.duration, _jitter_from_args(args), args.ssrc, args.seed)
    Path(args.output).write_bytes(write_pcap(stream_to_frames(stream)))
    _write_json(
        {
            "codec": args.codec,
            "duration": args.duration,
            "packets": len(stream),
            "ssrc": stream.ssrc,
            "output": args.output,
        },
        args.json,
    )
    return EXIT_OK


def cmd_embed(args) -> int:
    if args.input == args.output:
        raise LackLabError("input and output paths must differ")
    secret = Path(args.secret).read_bytes()
    entries, skipped = _load_streams(args.input)
    if skipped:
        print(f"warning: {skipped} non-RTP frames skipped and not re-emitted", file=sys.stderr)
    flow, ssrc, stream = _pick_stream(entries, args.ssrc)
    cfg = _lack_config(args)
    steg, log = lack_embed(stream, cfg, secret, strict=args.strict)

    frames: list[CaptureFrame] = []
    for other_flow, other_ssrc, other in entries:
        source = steg if other_ssrc == ssrc and other_flow == flow else other
        frames.extend(stream_to_frames(source, other_flow))
    frames.sort(key=lambda f: f.timestamp)
    Path(args.output).write_bytes(write_pcap(frames))

    _write_json(
        {
            "ssrc": ssrc,
            "secret_bytes": len(secret),
            "embedded_bytes": log.embedded_bytes,
            "steg_packets": len(log.entries),
            "delay": cfg.delay,
            "frequency": cfg.frequency,
            "mode": cfg.payload_mode,
            "output": args.output,
            "log": [
                {
                    "arrival_index": e.arrival_index,
                    "seq": e.seq,
                    "applied_delay": e.applied_delay,
                    "chunk": [e.chunk_start, e.chunk_end],
                }
                for e in log.entries
            ],
        },
        args.json,
    )
    if log.embedded_bytes < len(secret):
        print(
            f"note: carrier capacity reached, embedded {log.embedded_bytes} of {len(secret)} bytes",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_extract(args) -> int:
    entries, _ = _load_streams(args.input)
    _, _, stream = _pick_stream(entries, args.ssrc)
    secret = lack_extract(stream, _lack_config(args), args.buffer)
    Path(args.output).write_bytes(secret)
    _write_json({"recovered_bytes": len(secret), "output": args.output}, args.json)
    return EXIT_OK


def cmd_features(args) -> int:
    entries, _ = _load_streams(args.input)
    _, ssrc, stream = _pick_stream(entries, args.ssrc)
    kinds = [kind_from_name(name.strip()) for name in args.kinds.split(",")]
    matrix = feature_matrix(stream, kinds, clock_rate=args.clock_rate)
    doc = {"ssrc": ssrc, "kinds": [k.label for k in matrix.kinds], "rows": [list(r) for r in matrix.rows]}
    _write_json(doc, args.json or args.output or "-")
    return EXIT_OK


def cmd_export(args) -> int:
    entries, _ = _load_streams(args.input)
    _, _, stream = _pick_stream(entries, args.ssrc)
    axes = (kind_from_name(args.x), kind_from_name(args.y), kind_from_name(args.z))
    windows = slice_windows(stream, _window_config(args))
    if args.win is not None:
        if args.win >= len(windows):
            raise LackLabError(f"window {args.win} out of range, stream has {len(windows)}")
        windows = [windows[args.win]]
    clouds = [cloud_to_dict(build_point_cloud(w, axes)) for w in windows]
    _write_json(clouds, args.json or args.output or "-")
    return EXIT_OK


def cmd_detect(args) -> int:
    entries, _ = _load_streams(args.input)
    if args.ssrc is not None:
        entries = [_pick_stream(entries, args.ssrc)]
    th = DetectThresholds(
        max_ooo_ratio=args.max_ooo_ratio,
        max_delay_cv=args.max_delay_cv,
        min_prefix_share=args.min_prefix_share,
        min_prefix_count=args.min_prefix_count,
        size_bias_margin=args.size_bias_margin,
    )
    offsets = tuple(int(o) for o in args.offsets.split(","))
    reports = [detect_report(stream, _window_config(args), th, offsets) for _, _, stream in entries]
    suspicious = any(r.verdict == "suspicious" for r in reports)
    verdict = "suspicious" if suspicious else "clean"
    _write_json({"verdict": verdict, "streams": [report_to_dict(r) for r in reports]}, args.json)
    print(f"verdict: {verdict}")
    return EXIT_SUSPICIOUS if suspicious else EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app, load_captures

    captures = load_captures([Path(p) for p in args.captures])
    _write_json({"captures": [c.info().model_dump() for c in captures.values()]}, args.json)
    static = Path(args.static) if args.static else None
    if static is not None and not static.is_dir():
        raise LackLabError(f"static directory {static} does not exist")
    app = create_app(captures, static_dir=static)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lacklab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument(
            "--json", nargs="?", const="-", metavar="PATH",
            help="write machine-readable JSON to PATH (default: stdout)",
        )

    p = sub.add_parser("synth", help="generate a clean VoIP-like capture")
    p.add_argument("--codec", choices=sorted(PROFILES), default="g711")
    p.add_argument("--duration", type=float, default=60.0, help="call length in seconds")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ssrc", type=lambda s: int(s, 0), default=0x1ACC5EED)
    p.add_argument("--jitter", choices=["none", "gaussian", "exponential"], default="none")
    p.add_argument("--jitter-param", type=float, default=0.0, help="sigma or mean, seconds")
    p.add_argument("--jitter-seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    add_json(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("embed", help="hide a secret file in a capture's RTP stream")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--secret", required=True, help="file with the secret bytes")
    p.add_argument("--delay", type=float, default=0.5)
    p.add_argument("--freq", type=int, default=5)
    p.add_argument("--mode", choices=["plaintext", "ciphered"], default="plaintext")
    p.add_argument("--size-threshold", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ssrc", type=lambda s: int(s, 0), default=None)
    p.add_argument("--strict", action="store_true", help="fail if the secret exceeds capacity")
    add_json(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover the secret from a steg capture")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--delay", type=float, default=0.5)
    p.add_argument("--freq", type=int, default=5)
    p.add_argument("--mode", choices=["plaintext", "ciphered"], default="plaintext")
    p.add_argument("--size-threshold", type=int, default=100)
    p.add_argument("--buffer", type=float, default=0.2, help="receiver jitter buffer, seconds")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ssrc", type=lambda s: int(s, 0), default=None)
    add_json(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("features", help="dump per-packet traffic parameters")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", help="JSON output path")
    p.add_argument("--ssrc", type=lambda s: int(s, 0), default=None)
    p.add_argument("--kinds", default="arrival,seq,seqdiff,size,ptype,jitter,ooo,payload0_3")
    p.add_argument("--clock-rate", type=float, default=8000.0)
    add_json(p)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("export", help="export per-window 3D point clouds")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", help="JSON output path")
    p.add_argument("--ssrc", type=lambda s: int(s, 0), default=None)
    p.add_argument("--x", default="seqdiff")
    p.add_argument("--y", default="size")
    p.add_argument("--z", default="payload0_3")
    p.add_argument("--win", type=int, default=None, help="export only this window index")
    _add_window_args(p)
    add_json(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("detect", help="judge a capture: exit 0 clean, 3 suspicious")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--ssrc", type=lambda s: int(s, 0), default=None)
    p.add_argument("--offsets", default=",".join(str(o) for o in DEFAULT_OFFSETS))
    p.add_argument("--max-ooo-ratio", type=float, default=DetectThresholds.max_ooo_ratio)
    p.add_argument("--max-delay-cv", type=float, default=DetectThresholds.max_delay_cv)
    p.add_argument("--min-prefix-share", type=float, default=DetectThresholds.min_prefix_share)
    p.add_argument("--min-prefix-count", type=int, default=DetectThresholds.min_prefix_count)
    p.add_argument("--size-bias-margin", type=float, default=DetectThresholds.size_bias_margin)
    _add_window_args(p)
    add_json(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("serve", help="serve captures to the analyst workbench")
    p.add_argument("captures", nargs="*", help="pcap files to load")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--static", help="directory with built workbench assets")
    add_json(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LackLabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
