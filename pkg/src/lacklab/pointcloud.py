"""Multiplicity-weighted 3D point clouds over observation windows.

Each packet in a window contributes one point at its three selected feature
values; coinciding points of the same class coalesce into one point with a
multiplicity count, which makes repetition machine-checkable instead of a
visual density judgement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .features import FeatureKind, feature_matrix, out_of_order_flags
from .windows import ObservationWindow

CLASS_IN_ORDER = "in_order"
CLASS_OUT_OF_ORDER = "out_of_order"

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CloudPoint:
    x: float
    y: float
    z: float
    multiplicity: int
    cls: str


@dataclass
class PointCloud:
    axes: tuple[FeatureKind, FeatureKind, FeatureKind]
    points: list[CloudPoint]
    ssrc: int
    window: int
    packet_count: int


def build_point_cloud(
    window: ObservationWindow, axes: tuple[FeatureKind, FeatureKind, FeatureKind]
) -> PointCloud:
    """Coalesce the window's packets into classed, counted 3D points.

    Feature values and out-of-order classes are computed over the full
    stream (a packet is late relative to everything seen before it, not
    just its window) and then restricted to the window's range.
    """
    if len(axes) != 3:
        raise ValueError(f"exactly 3 axes required, got {len(axes)}")
    if len(window) == 0:
        raise ValueError("cannot build a point cloud over an empty window")
    matrix = feature_matrix(window.stream, list(axes))
    flags = out_of_order_flags(window.stream)

    counts: dict[tuple, int] = {}
    for i in range(window.start, window.end):
        x, y, z = matrix.rows[i]
        cls = CLASS_OUT_OF_ORDER if flags[i] else CLASS_IN_ORDER
        key = (x, y, z, cls)
        counts[key] = counts.get(key, 0) + 1

    points = [CloudPoint(x, y, z, n, cls) for (x, y, z, cls), n in counts.items()]
    points.sort(key=lambda p: (p.x, p.y, p.z, p.cls))
    return PointCloud(
        axes=tuple(axes),
        points=points,
        ssrc=window.stream.ssrc,
        window=window.label,
        packet_count=len(window),
    )


def cloud_to_dict(cloud: PointCloud) -> dict:
    return {
        "axes": [k.label for k in cloud.axes],
        "meta": {
            "ssrc": cloud.ssrc,
            "window": cloud.window,
            "packets": cloud.packet_count,
            "v": SCHEMA_VERSION,
        },
        "points": [
            {"x": p.x, "y": p.y, "z": p.z, "n": p.multiplicity, "class": p.cls}
            for p in cloud.points
        ],
    }


def canonical_json(obj) -> bytes:
    """Byte-stable UTF-8 JSON: sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode()


def cloud_to_json(cloud: PointCloud) -> bytes:
    """Canonical JSON bytes; points are already sorted by (x, y, z, class)."""
    return canonical_json(cloud_to_dict(cloud))
