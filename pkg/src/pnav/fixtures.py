"""Bundled fixture maps and the reference museum query.

The museum floor plan has two homotopy classes between start and goal: an
open route over the top of a dividing wall, and a narrow passage through it.
"""

from __future__ import annotations

from importlib import resources

from .gridmap import RobotModel, WorkspaceMap, load_map

# reference query parameters for the museum fixture
MUSEUM_DELTA = 1.0
MUSEUM_RHO = 0.3
MUSEUM_R = 2.0 * MUSEUM_DELTA
MUSEUM_START = (3, 3, 0)       # lattice (ix, iy, heading)
MUSEUM_GOAL = (18, 3)          # lattice (ix, iy), heading free
MUSEUM_START_WORLD = (3.5, 3.5, 0)
MUSEUM_GOAL_WORLD = (18.5, 3.5)


def museum_map() -> WorkspaceMap:
    text = resources.files("pnav.data").joinpath("museum.json").read_text()
    return load_map(text)


def museum_model() -> RobotModel:
    return RobotModel(footprint_radius=MUSEUM_RHO, camera_clearance_radius=MUSEUM_R)
