"""2-D occupancy maps: loading, collision predicates and camera-obstruction queries.

The map is a uniform grid of square cells.  Cell (0, 0) sits at the map
origin corner; cell indices grow with world x (ix) and world y (iy).
Everything outside the map bounds is treated as obstacle, so queries near
the border behave conservatively.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

# Subsamples per cell side when rasterizing the obstruction disc.
DISC_SAMPLES_PER_CELL = 4


class MapFormatError(ValueError):
    """Raised when map JSON is malformed; the message names the offending field."""


@dataclass(frozen=True)
class RobotModel:
    """Geometric model: footprint disc plus the camera clearance ball radius."""

    footprint_radius: float
    camera_clearance_radius: float

    def __post_init__(self):
        if self.footprint_radius <= 0:
            raise ValueError("footprint_radius must be > 0")
        if self.camera_clearance_radius <= 0:
            raise ValueError("camera_clearance_radius must be > 0")


@dataclass(frozen=True)
class WorkspaceMap:
    """Immutable occupancy grid.

    occupancy is indexed [iy, ix] with iy = 0 at the bottom (smallest world y).
    """

    width: int
    height: int
    resolution: float
    origin: tuple[float, float]
    occupancy: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("width and height must be >= 1")
        if self.resolution <= 0:
            raise ValueError("resolution must be > 0")
        occ = np.asarray(self.occupancy, dtype=bool)
        if occ.shape != (self.height, self.width):
            raise ValueError("occupancy shape must be (height, width)")
        occ.setflags(write=False)
        object.__setattr__(self, "occupancy", occ)

    # -- coordinate transforms -------------------------------------------------

    def world_to_cell(self, x: float, y: float) -> tuple[int, int]:
        ox, oy = self.origin
        return (int(math.floor((x - ox) / self.resolution)),
                int(math.floor((y - oy) / self.resolution)))

    def cell_center(self, ix: int, iy: int) -> tuple[float, float]:
        ox, oy = self.origin
        return (ox + (ix + 0.5) * self.resolution,
                oy + (iy + 0.5) * self.resolution)

    def in_bounds(self, ix: int, iy: int) -> bool:
        return 0 <= ix < self.width and 0 <= iy < self.height

    def is_obstacle(self, ix: int, iy: int) -> bool:
        """Out-of-bounds cells count as obstacle."""
        if not self.in_bounds(ix, iy):
            return True
        return bool(self.occupancy[iy, ix])

    @property
    def world_bounds(self) -> tuple[float, float, float, float]:
        ox, oy = self.origin
        return (ox, oy, ox + self.width * self.resolution, oy + self.height * self.resolution)


def load_map(source: str | bytes | dict) -> WorkspaceMap:
    """Parse the map JSON format into a validated WorkspaceMap.

    Rows are listed top row first; '#' marks an obstacle cell, '.' free.
    """
    if isinstance(source, (str, bytes)):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise MapFormatError(f"invalid JSON: {exc}") from exc
    else:
        data = source
    if not isinstance(data, dict):
        raise MapFormatError("map document must be a JSON object")

    for key in ("width", "height", "resolution", "origin", "rows"):
        if key not in data:
            raise MapFormatError(f"missing field '{key}'")

    width, height = data["width"], data["height"]
    if not isinstance(width, int) or width < 1:
        raise MapFormatError("'width' must be a positive integer")
    if not isinstance(height, int) or height < 1:
        raise MapFormatError("'height' must be a positive integer")
    resolution = data["resolution"]
    if not isinstance(resolution, (int, float)) or resolution <= 0:
        raise MapFormatError("'resolution' must be a positive number")
    origin = data["origin"]
    if (not isinstance(origin, (list, tuple)) or len(origin) != 2
            or not all(isinstance(v, (int, float)) for v in origin)):
        raise MapFormatError("'origin' must be [x, y]")

    rows = data["rows"]
    if not isinstance(rows, list) or not rows:
        raise MapFormatError("'rows' has zero rows")
    if len(rows) != height:
        raise MapFormatError(f"'rows' count {len(rows)} does not match height {height}")

    occ = np.zeros((height, width), dtype=bool)
    for i, row in enumerate(rows):
        if not isinstance(row, str) or len(row) != width:
            raise MapFormatError(f"'rows[{i}]' length does not match width {width}")
        for j, ch in enumerate(row):
            if ch == "#":
                occ[height - 1 - i, j] = True  # rows are top-first
            elif ch != ".":
                raise MapFormatError(f"'rows[{i}]' has invalid character {ch!r}")

    return WorkspaceMap(width=width, height=height, resolution=float(resolution),
                        origin=(float(origin[0]), float(origin[1])), occupancy=occ)


def dump_map(wmap: WorkspaceMap) -> str:
    """Inverse of load_map (useful for fixtures and tests)."""
    rows = []
    for iy in range(wmap.height - 1, -1, -1):
        rows.append("".join("#" if wmap.occupancy[iy, ix] else "."
                            for ix in range(wmap.width)))
    return json.dumps({
        "width": wmap.width,
        "height": wmap.height,
        "resolution": wmap.resolution,
        "origin": list(wmap.origin),
        "rows": rows,
    }, indent=1)


def footprint_free(wmap: WorkspaceMap, position: tuple[float, float], rho: float) -> bool:
    """True iff a disc of radius rho at position overlaps no obstacle cell.

    Conservative cell-overlap test: any obstacle (or out-of-bounds) cell whose
    square strictly intersects the open disc makes the placement invalid.
    """
    if rho <= 0:
        raise ValueError("rho must be > 0")
    x, y = position
    res = wmap.resolution
    ox, oy = wmap.origin
    # Disc must lie within map bounds (touching the border is allowed).
    xmin, ymin, xmax, ymax = wmap.world_bounds
    if x - rho < xmin or y - rho < ymin or x + rho > xmax or y + rho > ymax:
        return False

    ix0 = int(math.floor((x - rho - ox) / res))
    ix1 = int(math.floor((x + rho - ox) / res))
    iy0 = int(math.floor((y - rho - oy) / res))
    iy1 = int(math.floor((y + rho - oy) / res))
    for iy in range(iy0, iy1 + 1):
        for ix in range(ix0, ix1 + 1):
            if not wmap.is_obstacle(ix, iy):
                continue
            # closest point of the cell square to the disc center
            cx0, cy0 = ox + ix * res, oy + iy * res
            dx = x - min(max(x, cx0), cx0 + res)
            dy = y - min(max(y, cy0), cy0 + res)
            if dx * dx + dy * dy < rho * rho:
                return False
    return True


def _dist_point_segment(px, py, ax, ay, bx, by):
    vx, vy = bx - ax, by - ay
    wx, wy = px - ax, py - ay
    vv = vx * vx + vy * vy
    t = 0.0 if vv == 0.0 else min(max((wx * vx + wy * vy) / vv, 0.0), 1.0)
    dx, dy = px - (ax + t * vx), py - (ay + t * vy)
    return math.hypot(dx, dy)


def _segment_box_distance(p0, p1, x0, y0, x1, y1):
    """Exact distance between a segment and an axis-aligned box (0 if they touch)."""
    # segment endpoint inside the box
    for (px, py) in (p0, p1):
        if x0 <= px <= x1 and y0 <= py <= y1:
            return 0.0
    corners = ((x0, y0), (x1, y0), (x1, y1), (x0, y1))
    best = math.inf
    ax, ay = p0
    bx, by = p1
    dxs, dys = bx - ax, by - ay
    for i in range(4):
        cx0, cy0 = corners[i]
        cx1, cy1 = corners[(i + 1) % 4]
        # segment-segment: check crossing, else closest endpoint distances
        ex, ey = cx1 - cx0, cy1 - cy0
        denom = dxs * ey - dys * ex
        if denom != 0.0:
            t = ((cx0 - ax) * ey - (cy0 - ay) * ex) / denom
            u = ((cx0 - ax) * dys - (cy0 - ay) * dxs) / denom
            if 0.0 <= t <= 1.0 and 0.0 <= u <= 1.0:
                return 0.0
        best = min(best,
                   _dist_point_segment(cx0, cy0, ax, ay, bx, by),
                   _dist_point_segment(cx1, cy1, ax, ay, bx, by),
                   _dist_point_segment(ax, ay, cx0, cy0, cx1, cy1),
                   _dist_point_segment(bx, by, cx0, cy0, cx1, cy1))
    return best


def swept_footprint_free(wmap: WorkspaceMap, p0: tuple[float, float],
                         p1: tuple[float, float], rho: float) -> bool:
    """True iff the disc of radius rho stays obstacle-free while translating
    from p0 to p1.

    Exact continuous test: collision iff some obstacle cell square lies
    strictly closer than rho to the segment; the rho-inflated segment
    bounding box must also stay inside the map.
    """
    if rho <= 0:
        raise ValueError("rho must be > 0")
    res = wmap.resolution
    ox, oy = wmap.origin
    xmin, ymin, xmax, ymax = wmap.world_bounds
    lo_x, hi_x = min(p0[0], p1[0]), max(p0[0], p1[0])
    lo_y, hi_y = min(p0[1], p1[1]), max(p0[1], p1[1])
    if lo_x - rho < xmin or lo_y - rho < ymin or hi_x + rho > xmax or hi_y + rho > ymax:
        return False
    ix0 = int(math.floor((lo_x - rho - ox) / res))
    ix1 = int(math.floor((hi_x + rho - ox) / res))
    iy0 = int(math.floor((lo_y - rho - oy) / res))
    iy1 = int(math.floor((hi_y + rho - oy) / res))
    for iy in range(iy0, iy1 + 1):
        for ix in range(ix0, ix1 + 1):
            if not wmap.is_obstacle(ix, iy):
                continue
            cx0, cy0 = ox + ix * res, oy + iy * res
            if _segment_box_distance(p0, p1, cx0, cy0, cx0 + res, cy0 + res) < rho:
                return False
    return True


def _obstruction_cell_units(wmap: WorkspaceMap, px: float, py: float, r_cells: float) -> float:
    """Obstruction ratio with position and radius expressed in cell units.

    Each cell is subsampled on an s x s grid; sample points inside the disc
    are counted and those falling on obstacle (or out-of-bounds) cells form
    the obstructed fraction.  Deterministic by construction.
    """
    s = DISC_SAMPLES_PER_CELL
    ix0 = int(math.floor(px - r_cells))
    ix1 = int(math.floor(px + r_cells))
    iy0 = int(math.floor(py - r_cells))
    iy1 = int(math.floor(py + r_cells))

    offs = (np.arange(s) + 0.5) / s
    xs = (np.arange(ix0, ix1 + 1)[:, None] + offs[None, :]).ravel()
    ys = (np.arange(iy0, iy1 + 1)[:, None] + offs[None, :]).ravel()
    dx2 = (xs - px) ** 2
    dy2 = (ys - py) ** 2
    inside = dx2[None, :] + dy2[:, None] <= r_cells * r_cells  # [y, x]
    total = int(inside.sum())
    if total == 0:
        # radius small relative to the subsample grid: fall back to the host cell
        return 1.0 if wmap.is_obstacle(int(math.floor(px)), int(math.floor(py))) else 0.0

    cxs = np.floor(xs).astype(int)
    cys = np.floor(ys).astype(int)
    occ_x = (cxs < 0) | (cxs >= wmap.width)
    occ_y = (cys < 0) | (cys >= wmap.height)
    occupied = np.ones((len(cys), len(cxs)), dtype=bool)
    valid = ~occ_y[:, None] & ~occ_x[None, :]
    if valid.any():
        occupied[valid] = wmap.occupancy[
            np.broadcast_to(cys[:, None], valid.shape)[valid],
            np.broadcast_to(cxs[None, :], valid.shape)[valid],
        ]
    obstructed = int((inside & occupied).sum())
    return obstructed / total


def obstruction_ratio(wmap: WorkspaceMap, position: tuple[float, float], r: float) -> float:
    """Fraction of the radius-r disc around position occupied by obstacles.

    Area ratio over the 2-D disc; cells outside map bounds count as obstructed.
    """
    if r <= 0:
        raise ValueError("r must be > 0")
    ox, oy = wmap.origin
    res = wmap.resolution
    return _obstruction_cell_units(wmap, (position[0] - ox) / res,
                                   (position[1] - oy) / res, r / res)


def obstruction_field(wmap: WorkspaceMap, r: float) -> np.ndarray:
    """Obstruction ratio at every cell center, shape (height, width).

    Identical to per-point obstruction_ratio calls at cell centers.
    """
    if r <= 0:
        raise ValueError("r must be > 0")
    out = np.empty((wmap.height, wmap.width), dtype=float)
    for iy in range(wmap.height):
        for ix in range(wmap.width):
            out[iy, ix] = obstruction_ratio(wmap, wmap.cell_center(ix, iy), r)
    return out
