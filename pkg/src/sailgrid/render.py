"""Wavefront snapshots: traced search states rendered as P6 pixmaps.

Cell colors: unexpanded white, open light blue, expanded blue, invalid
endpoints black. The goal cell is always overdrawn with the magenta marker;
the start marker is drawn only while the start is unexpanded, so the count
of expanded-colored pixels in any frame equals the closed-list size exactly.
An optional path overlay recolors the solution cells (off by default, and
off whenever pixel counts must be exact).
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .search import Trace
from .worlds import EpisodeSpec

__all__ = ["COLORS", "render_frame", "render_snapshot", "write_ppm"]

COLORS = {
    "unexpanded": (255, 255, 255),
    "open": (176, 208, 255),
    "expanded": (30, 90, 200),
    "invalid": (0, 0, 0),
    "marker": (255, 0, 255),
    "path": (255, 140, 0),
}

_STATUS_COLORS = ("unexpanded", "open", "expanded", "invalid")


def render_frame(trace: Trace, frame: int, spec: EpisodeSpec, path=None) -> np.ndarray:
    """RGB array (height, width, 3) for one trace frame."""
    status = trace.status_at(frame)
    h, w = status.shape
    rgb = np.empty((h, w, 3), dtype=np.uint8)
    for code, name in enumerate(_STATUS_COLORS):
        rgb[status == code] = COLORS[name]
    if path:
        for v in path:
            rgb[v[1], v[0]] = COLORS["path"]
    sx, sy = spec.start
    gx, gy = spec.goal
    if status[sy, sx] != 2:  # never overdraw an expanded cell
        rgb[sy, sx] = COLORS["marker"]
    rgb[gy, gx] = COLORS["marker"]
    return rgb


def write_ppm(rgb: np.ndarray, path) -> None:
    """Binary P6; top image row holds the highest y, like the PGM worlds."""
    h, w, _ = rgb.shape
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    Path(path).write_bytes(header + rgb[::-1].tobytes())


def render_snapshot(trace: Trace, frame: int, spec: EpisodeSpec, out_path, path=None) -> bytes:
    """Render one frame to a P6 file; returns the file bytes (deterministic
    for a given trace frame)."""
    rgb = render_frame(trace, frame, spec, path=path)
    write_ppm(rgb, out_path)
    return Path(out_path).read_bytes()
