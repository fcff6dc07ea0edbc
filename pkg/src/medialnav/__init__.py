"""medialnav: tight arc/segment bounding shapes for 2D agents and reciprocal
collision avoidance between heterogeneous agents.

The pipeline: approximate each agent contour by interpolated medial circles
(`medial`), compute Minkowski sums of the convex pieces (`minkowski`), turn
them into reciprocal velocity constraints solved by a small LP (`rvo`), and
step many agents at once (`sim`), optionally rotating elongated agents
through narrow gaps (`orientation`).
"""

from .geom import (
    Arc, Circle, ContainmentError, DegenerateError, GeometryError,
    MedialTuple, Outline, Segment, circumcircle, closest_point_on_outline,
    disc_hull, make_tuple, point_in_tuple, segment_outline_distance,
)
from .medial import (
    BoundarySamples, BuildParams, CoverageFailure, MedialGraph, MedialShape,
    SelfIntersectionError, TriangleMesh, build_medial_graph, build_shape,
    constrained_delaunay, filter_circles, interpolate_tuples, modify_cover,
    polygonize, sample_boundary, verify_cover,
)
from .minkowski import (
    MinkowskiTable, UnknownShapeType, build_tables, lookup,
    minkowski_two_tuples, offset_tuple, swept_tuple,
)
from .orientation import (
    AgentHull, WidthTable, build_width_table, convex_hull_of_tuples,
    min_rotation_for_clearance, update_orientation, width,
)
from .rvo import (
    ConstraintSet, HalfPlane, VelocityObstacle, VelocityResult,
    collect_constraints, fallback_velocity, orca_halfplane, solve_velocity,
    velocity_obstacle,
)
from .sim import (
    AgentState, EmptyRun, MetricsReport, World, WorldParams,
    exact_collision_oracle, false_positive_report, make_agent,
    preferred_velocity, query_neighbors, run, step,
)
from .scenarios import Scenario, SchemaError, build_world, parse_scenario

__version__ = "0.1.0"
