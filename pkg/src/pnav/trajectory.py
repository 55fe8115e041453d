"""Constant-speed time parameterization and cost evaluation of trajectories.

A piecewise-linear path with rotations in place becomes a SegmentPath
(alternating Rotate / Translate spans), then a TimedTrajectory sampled on a
uniform tick.  Evaluation produces the (V, N, D) report: time-averaged
obstruction, rotation count and traveled distance, plus the duration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .gridmap import WorkspaceMap, obstruction_ratio
from .lattice import LatticeNode, node_position
from .rrt import PolyPath

HEADING_EPS_DEG = 1e-9
POSITION_EPS = 1e-9


class TrajectoryError(ValueError):
    pass


def wrap_deg(angle: float) -> float:
    return angle % 360.0


def signed_arc_deg(from_heading: float, to_heading: float) -> float:
    """Shorter rotation arc in degrees; 180-degree ties resolve counterclockwise."""
    d = (to_heading - from_heading) % 360.0
    if d > 180.0:
        d -= 360.0
    elif d == 180.0:
        d = 180.0  # tie: counterclockwise
    return d


@dataclass(frozen=True)
class Rotate:
    point: tuple[float, float]
    from_heading: float
    to_heading: float
    arc: float  # signed degrees, counterclockwise positive


@dataclass(frozen=True)
class Translate:
    p0: tuple[float, float]
    p1: tuple[float, float]
    heading: float

    @property
    def length(self) -> float:
        return math.hypot(self.p1[0] - self.p0[0], self.p1[1] - self.p0[1])


@dataclass(frozen=True)
class SegmentPath:
    """Chained Rotate/Translate segments starting from an initial pose."""

    start: tuple[float, float]
    start_heading: float
    segments: tuple

    def rotation_count(self) -> int:
        return sum(1 for s in self.segments if isinstance(s, Rotate))

    def polyline_length(self) -> float:
        return sum(s.length for s in self.segments if isinstance(s, Translate))

    def rotate_points(self) -> list[tuple[float, float]]:
        return [s.point for s in self.segments if isinstance(s, Rotate)]


def to_segment_path(path, wmap: WorkspaceMap | None = None,
                    delta: float | None = None) -> SegmentPath:
    """Convert a lattice node path (needs wmap and delta) or a PolyPath.

    Lattice rotations use the shorter arc; runs of equal-heading translations
    merge into a single Translate.  Polyline headings are tangent to the
    segments, with a Rotate at each direction change.
    """
    if isinstance(path, PolyPath):
        return _from_polyline(path)
    return _from_lattice(path, wmap, delta)


def _from_lattice(path: list[LatticeNode], wmap: WorkspaceMap, delta: float) -> SegmentPath:
    if not path:
        raise TrajectoryError("empty path")
    if wmap is None or delta is None:
        raise TrajectoryError("lattice paths need wmap and delta")
    pos = [node_position(n, wmap, delta) for n in path]
    segments = []
    i = 0
    while i < len(path) - 1:
        a, b = path[i], path[i + 1]
        if (a.ix, a.iy) == (b.ix, b.iy):
            arc = signed_arc_deg(a.heading, b.heading)
            segments.append(Rotate(pos[i], float(a.heading), float(b.heading), arc))
            i += 1
        else:
            j = i + 1  # extend the straight run while the heading repeats
            while (j < len(path) - 1
                   and path[j + 1].heading == a.heading
                   and (path[j + 1].ix, path[j + 1].iy) != (path[j].ix, path[j].iy)):
                j += 1
            segments.append(Translate(pos[i], pos[j], float(a.heading)))
            i = j
    return SegmentPath(pos[0], float(path[0].heading), tuple(segments))


def _from_polyline(poly: PolyPath) -> SegmentPath:
    verts = poly.vertices
    if len(verts) == 1:
        return SegmentPath(verts[0], 0.0, ())
    headings = []
    for a, b in zip(verts, verts[1:]):
        headings.append(wrap_deg(math.degrees(math.atan2(b[1] - a[1], b[0] - a[0]))))
    segments = []
    run_start = 0
    cur = headings[0]
    for i in range(1, len(headings) + 1):
        if i < len(headings) and abs(signed_arc_deg(cur, headings[i])) <= HEADING_EPS_DEG:
            continue
        segments.append(Translate(verts[run_start], verts[i], cur))
        if i < len(headings):
            arc = signed_arc_deg(cur, headings[i])
            segments.append(Rotate(verts[i], cur, headings[i], arc))
            run_start = i
            cur = headings[i]
    return SegmentPath(verts[0], headings[0], tuple(segments))


@dataclass(frozen=True)
class TimedTrajectory:
    """Uniformly ticked samples (t, x, y, theta_deg); final sample lands on T."""

    samples: np.ndarray  # shape (n, 4)
    v: float
    omega_deg: float
    dt: float

    @property
    def duration(self) -> float:
        return float(self.samples[-1, 0])


def to_timed(spath: SegmentPath, v: float = 1.0, omega_deg: float = 90.0,
             dt: float = 0.05) -> TimedTrajectory:
    """Sample the path executed at constant speed v with in-place rotations at
    constant rate omega_deg."""
    if v <= 0 or omega_deg <= 0 or dt <= 0:
        raise TrajectoryError("v, omega and dt must be > 0")

    # per-segment schedule: (t_start, t_end, segment)
    schedule = []
    t = 0.0
    for seg in spath.segments:
        if isinstance(seg, Translate):
            dur = seg.length / v
        else:
            dur = abs(seg.arc) / omega_deg
        schedule.append((t, t + dur, seg))
        t += dur
    total = t

    def pose_at(tq: float) -> tuple[float, float, float]:
        for t0, t1, seg in schedule:
            if tq <= t1 or seg is schedule[-1][2]:
                if tq < t0:
                    tq = t0
                frac = 0.0 if t1 == t0 else (tq - t0) / (t1 - t0)
                frac = min(max(frac, 0.0), 1.0)
                if isinstance(seg, Translate):
                    x = seg.p0[0] + frac * (seg.p1[0] - seg.p0[0])
                    y = seg.p0[1] + frac * (seg.p1[1] - seg.p0[1])
                    return (x, y, wrap_deg(seg.heading))
                h = wrap_deg(seg.from_heading + frac * seg.arc)
                return (seg.point[0], seg.point[1], h)
        return (spath.start[0], spath.start[1], wrap_deg(spath.start_heading))

    times = [0.0]
    k = 1
    while k * dt < total - 1e-12:
        times.append(k * dt)
        k += 1
    if total > 0.0:
        times.append(total)

    rows = np.empty((len(times), 4), dtype=float)
    for i, tq in enumerate(times):
        x, y, h = pose_at(tq)
        rows[i] = (tq, x, y, h)
    return TimedTrajectory(rows, v, omega_deg, dt)


@dataclass(frozen=True)
class CostReport:
    """Trajectory criteria: time-averaged obstruction V, rotation count N,
    distance D, duration T; search_w1_sum carries the additive obstruction
    total when the trajectory came from a lattice plan."""

    V: float
    N: int
    D: float
    T: float
    search_w1_sum: float | None = None

    def to_dict(self) -> dict:
        out = {"V": self.V, "N": self.N, "D": self.D, "T": self.T}
        if self.search_w1_sum is not None:
            out["search_w1_sum"] = self.search_w1_sum
        return out


def _heading_changes(theta: np.ndarray) -> np.ndarray:
    d = (np.diff(theta) + 180.0) % 360.0 - 180.0
    return np.abs(d) > HEADING_EPS_DEG


def eval_costs(timed: TimedTrajectory, wmap: WorkspaceMap, r: float,
               search_w1_sum: float | None = None) -> CostReport:
    """Evaluate (V, N, D) on a timed trajectory.

    V: trapezoidal time integral of the obstruction ratio divided by T (the
    single-pose value when T = 0).  D: summed sample-to-sample displacement.
    N: maximal runs of sample intervals over which the heading changes
    (rotations in place show up as zero-displacement heading drift).
    """
    s = timed.samples
    t, x, y, theta = s[:, 0], s[:, 1], s[:, 2], s[:, 3]
    phi = np.array([obstruction_ratio(wmap, (xi, yi), r) for xi, yi in zip(x, y)])

    T = float(t[-1])
    if len(s) == 1 or T == 0.0:
        return CostReport(V=float(phi[0]), N=0, D=0.0, T=T,
                          search_w1_sum=search_w1_sum)

    trapezoid = getattr(np, "trapezoid", np.trapz)
    V = float(trapezoid(phi, t) / T)
    D = float(np.sum(np.hypot(np.diff(x), np.diff(y))))

    changing = _heading_changes(theta)
    N = 0
    in_run = False
    for c in changing:
        if c and not in_run:
            N += 1
            in_run = True
        elif not c:
            in_run = False
    return CostReport(V=V, N=N, D=D, T=T, search_w1_sum=search_w1_sum)


# -- timed-trajectory JSON ------------------------------------------------------


def timed_to_json(timed: TimedTrajectory) -> str:
    samples = [{"t": float(r[0]), "x": float(r[1]), "y": float(r[2]),
                "theta_deg": float(r[3])} for r in timed.samples]
    return json.dumps({"v": timed.v, "omega_deg": timed.omega_deg,
                       "dt": timed.dt, "samples": samples},
                      indent=1, sort_keys=True)


def timed_from_json(text: str | dict) -> TimedTrajectory:
    """Parse and validate the trajectory JSON; errors name the bad field."""
    if isinstance(text, (str, bytes)):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise TrajectoryError(f"invalid JSON: {exc}") from exc
    else:
        data = text
    if not isinstance(data, dict):
        raise TrajectoryError("trajectory document must be a JSON object")
    for key in ("v", "omega_deg", "dt", "samples"):
        if key not in data:
            raise TrajectoryError(f"missing field '{key}'")
    for key in ("v", "omega_deg", "dt"):
        if not isinstance(data[key], (int, float)) or data[key] <= 0:
            raise TrajectoryError(f"'{key}' must be a positive number")
    samples = data["samples"]
    if not isinstance(samples, list) or not samples:
        raise TrajectoryError("'samples' must be a non-empty list")
    rows = np.empty((len(samples), 4), dtype=float)
    prev_t = -math.inf
    for i, rec in enumerate(samples):
        if not isinstance(rec, dict):
            raise TrajectoryError(f"'samples[{i}]' must be an object")
        for key in ("t", "x", "y", "theta_deg"):
            if key not in rec or not isinstance(rec[key], (int, float)):
                raise TrajectoryError(f"'samples[{i}].{key}' must be a number")
        if rec["t"] <= prev_t:
            raise TrajectoryError(f"'samples[{i}].t' must be strictly increasing")
        prev_t = rec["t"]
        rows[i] = (rec["t"], rec["x"], rec["y"], rec["theta_deg"])
    if rows[0, 0] != 0.0:
        raise TrajectoryError("'samples[0].t' must be 0")
    return TimedTrajectory(rows, float(data["v"]), float(data["omega_deg"]),
                           float(data["dt"]))
