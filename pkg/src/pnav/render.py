"""Deterministic SVG rendering of maps and trajectories.

Output is plain string assembly so identical inputs give byte-identical
files: obstacle cells as filled squares, each trajectory a polyline with
markers at rotation poses, and a legend row per trajectory.
"""

from __future__ import annotations

import numpy as np

from .gridmap import WorkspaceMap
from .trajectory import TimedTrajectory, _heading_changes

PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#17becf")

_SCALE = 24.0  # px per meter
_LEGEND_ROW = 18
_MARGIN = 10


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def rotation_points(timed: TimedTrajectory) -> list[tuple[float, float]]:
    """Positions of zero-displacement heading-change spans in the samples."""
    s = timed.samples
    if len(s) < 2:
        return []
    changing = _heading_changes(s[:, 3])
    moved = np.hypot(np.diff(s[:, 1]), np.diff(s[:, 2])) > 1e-9
    points = []
    in_run = False
    for i, c in enumerate(changing):
        if c and not moved[i] and not in_run:
            points.append((float(s[i, 1]), float(s[i, 2])))
            in_run = True
        elif not c:
            in_run = False
    return points


def render_svg(wmap: WorkspaceMap,
               trajectories: list[tuple[str, TimedTrajectory]]) -> str:
    """Render the map with any number of labeled trajectories."""
    xmin, ymin, xmax, ymax = wmap.world_bounds
    w_px = (xmax - xmin) * _SCALE + 2 * _MARGIN
    h_px = (ymax - ymin) * _SCALE + 2 * _MARGIN
    legend_h = _LEGEND_ROW * len(trajectories) + (10 if trajectories else 0)

    def sx(x: float) -> float:
        return _MARGIN + (x - xmin) * _SCALE

    def sy(y: float) -> float:
        return _MARGIN + (ymax - y) * _SCALE  # world y up, svg y down

    out = []
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" '
               f'width="{_fmt(w_px)}" height="{_fmt(h_px + legend_h)}" '
               f'viewBox="0 0 {_fmt(w_px)} {_fmt(h_px + legend_h)}">')
    out.append(f'<rect x="0" y="0" width="{_fmt(w_px)}" '
               f'height="{_fmt(h_px + legend_h)}" fill="#ffffff"/>')

    cell = wmap.resolution * _SCALE
    for iy in range(wmap.height):
        for ix in range(wmap.width):
            if wmap.occupancy[iy, ix]:
                cx, cy = wmap.cell_center(ix, iy)
                out.append(f'<rect x="{_fmt(sx(cx) - cell / 2)}" '
                           f'y="{_fmt(sy(cy) - cell / 2)}" '
                           f'width="{_fmt(cell)}" height="{_fmt(cell)}" '
                           f'fill="#444444"/>')

    for i, (label, timed) in enumerate(trajectories):
        color = PALETTE[i % len(PALETTE)]
        s = timed.samples
        pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(s[:, 1], s[:, 2]))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                   f'stroke-width="2"/>')
        for (rx, ry) in rotation_points(timed):
            out.append(f'<circle cx="{_fmt(sx(rx))}" cy="{_fmt(sy(ry))}" r="4" '
                       f'fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = h_px + _LEGEND_ROW * (i + 1) - 4
        out.append(f'<rect x="{_fmt(float(_MARGIN))}" y="{_fmt(ly - 9)}" '
                   f'width="12" height="12" fill="{color}"/>')
        out.append(f'<text x="{_fmt(_MARGIN + 18.0)}" y="{_fmt(ly)}" '
                   f'font-family="monospace" font-size="12">{label}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
