"""Scenario files: shape contours, explicit agents, world parameters, and
parameterized benchmark generators (antipodal circle, crossing streams,
hallway, narrow door).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geom import GeometryError
from .medial import BuildParams, MedialShape, build_shape
from .sim import World, WorldParams, make_agent


class SchemaError(GeometryError):
    pass


@dataclass
class AgentSpec:
    shape: str
    position: tuple
    goal: tuple
    orientation: float = 0.0
    v_max: float = 1.5
    static: bool = False


@dataclass
class Scenario:
    shapes: dict = field(default_factory=dict)       # name -> contour points
    agents: list = field(default_factory=list)       # AgentSpec
    world: WorldParams = field(default_factory=WorldParams)
    generators: list = field(default_factory=list)   # raw dicts
    seed: int = 0


def _require(cond, msg):
    if not cond:
        raise SchemaError(msg)


def _point(v, where):
    _require(isinstance(v, (list, tuple)) and len(v) == 2, f"{where}: expected [x, y]")
    return (float(v[0]), float(v[1]))


def parse_scenario(doc: dict) -> Scenario:
    """Validate a scenario document; errors name the offending entity."""
    _require(isinstance(doc, dict), "scenario: top level must be an object")
    sc = Scenario()
    shapes = doc.get("shapes", {})
    _require(isinstance(shapes, dict), "shapes: must be a mapping")
    for name, contour in shapes.items():
        _require(isinstance(contour, list) and len(contour) >= 3,
                 f"shape {name!r}: contour needs at least 3 points")
        sc.shapes[name] = [_point(p, f"shape {name!r}") for p in contour]

    world = doc.get("world", {})
    _require(isinstance(world, dict), "world: must be a mapping")
    wp = WorldParams()
    for key in ("dt", "tau", "neighbor_dist", "max_neighbors", "omega_max"):
        if key in world and world[key] is not None:
            val = world[key]
            _require(isinstance(val, (int, float)) and val > 0,
                     f"world.{key}: must be a positive number")
            setattr(wp, key, int(val) if key == "max_neighbors" else float(val))
    sc.world = wp
    sc.seed = int(doc.get("seed", 0))

    for k, a in enumerate(doc.get("agents", [])):
        _require(isinstance(a, dict), f"agent #{k}: must be a mapping")
        name = a.get("shape")
        _require(name in sc.shapes, f"agent #{k}: unknown shape name {name!r}")
        spec = AgentSpec(
            shape=name,
            position=_point(a.get("position"), f"agent #{k} position"),
            goal=_point(a.get("goal", a.get("position")), f"agent #{k} goal"),
            orientation=float(a.get("orientation", 0.0)),
            v_max=float(a.get("v_max", 1.5)),
            static=bool(a.get("static", False)),
        )
        _require(spec.v_max > 0, f"agent #{k}: v_max must be positive")
        sc.agents.append(spec)

    gens = doc.get("generators", [])
    _require(isinstance(gens, list), "generators: must be a list")
    known = {"antipodal", "crossing", "hallway", "narrow_door"}
    for k, g in enumerate(gens):
        _require(isinstance(g, dict), f"generator #{k}: must be a mapping")
        kind = g.get("kind")
        _require(kind in known, f"generator #{k}: unknown kind {kind!r}")
        for nm in g.get("shapes", []):
            _require(nm in sc.shapes, f"generator #{k}: unknown shape name {nm!r}")
        sc.generators.append(dict(g))
    _require(sc.agents or sc.generators, "scenario: no agents and no generators")
    return sc


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"scenario {path}: invalid JSON ({exc})") from exc
    return parse_scenario(doc)


# ---------------------------------------------------------------------------
# built-in contours and generators

def stadium_contour(length, width, n_cap=10):
    """Rounded-rectangle (stadium) polygon with sampled end caps."""
    r = width / 2.0
    cxr = length - r
    pts = []
    for k in range(n_cap + 1):
        a = -math.pi / 2 + math.pi * k / n_cap
        pts.append((cxr + r * math.cos(a), r + r * math.sin(a)))
    for k in range(1, n_cap + 1):
        a = math.pi / 2 + math.pi * k / n_cap
        pts.append((r + r * math.cos(a), r + r * math.sin(a)))
    if abs(cxr - r) < 1e-12:
        pts.pop()  # pure circle: last point duplicates the first
    return pts


def rectangle_contour(length, width):
    return [(0.0, 0.0), (length, 0.0), (length, width), (0.0, width)]


def disc_union_contour(discs, n=360):
    """Boundary of a union of discs sampled by rays from the centroid; valid
    for star-shaped unions (overlapping chains of discs)."""
    cen = (sum(c[0] for c, _ in discs) / len(discs),
           sum(c[1] for c, _ in discs) / len(discs))
    pts = []
    for k in range(n):
        a = 2 * math.pi * k / n
        d = (math.cos(a), math.sin(a))
        best = 0.0
        for (c, r) in discs:
            ox, oy = cen[0] - c[0], cen[1] - c[1]
            b = ox * d[0] + oy * d[1]
            q = ox * ox + oy * oy - r * r
            disc_v = b * b - q
            if disc_v >= 0:
                t = -b + math.sqrt(disc_v)
                best = max(best, t)
        if best > 0:
            pts.append((cen[0] + best * d[0], cen[1] + best * d[1]))
    return pts


DEFAULT_SHAPES = {
    "disc": stadium_contour(1.0, 1.0, 12),
    "capsule": stadium_contour(2.2, 0.9, 10),
    "snowman": disc_union_contour([((0.0, 0.0), 0.55), ((0.85, 0.12), 0.42),
                                   ((1.7, 0.0), 0.3)], 240),
    "lozenge": [(0.0, 0.35), (1.1, 0.0), (2.6, 0.25), (2.6, 0.85),
                (1.1, 1.1), (0.0, 0.75)],
}


def _expand_generator(g, sc: Scenario, rng):
    kind = g["kind"]
    out = []
    if kind == "antipodal":
        n = int(g.get("n", 20))
        radius = float(g.get("radius", 12.0))
        names = g.get("shapes") or list(sc.shapes) or ["disc"]
        v_max = float(g.get("v_max", 1.5))
        jitter = float(g.get("jitter", 0.02))
        for k in range(n):
            ang = 2 * math.pi * k / n + jitter * (rng.random() - 0.5)
            pos = (radius * math.cos(ang), radius * math.sin(ang))
            goal = (-radius * math.cos(ang), -radius * math.sin(ang))
            out.append(AgentSpec(names[k % len(names)], pos, goal,
                                 orientation=math.atan2(goal[1] - pos[1], goal[0] - pos[0]),
                                 v_max=v_max))
    elif kind == "crossing":
        n = int(g.get("n", 16))
        gap = float(g.get("gap", 2.0))
        span = float(g.get("span", 14.0))
        names = g.get("shapes") or list(sc.shapes) or ["disc"]
        v_max = float(g.get("v_max", 1.5))
        per = n // 2
        for k in range(per):
            y = (k - (per - 1) / 2) * gap
            out.append(AgentSpec(names[k % len(names)], (-span, y), (span, y),
                                 orientation=0.0, v_max=v_max))
        for k in range(n - per):
            x = (k - (n - per - 1) / 2) * gap
            out.append(AgentSpec(names[k % len(names)], (x, -span), (x, span),
                                 orientation=math.pi / 2, v_max=v_max))
    elif kind == "hallway":
        width = float(g.get("width", 2.4))
        length = float(g.get("length", 14.0))
        wall_t = float(g.get("wall_thickness", 1.0))
        names = g.get("shapes") or list(sc.shapes) or ["capsule"]
        v_max = float(g.get("v_max", 1.2))
        sc.shapes.setdefault("_wall_h", rectangle_contour(length, wall_t))
        half = width / 2.0
        out.append(AgentSpec("_wall_h", (0.0, half + wall_t / 2), (0.0, half + wall_t / 2),
                             static=True))
        out.append(AgentSpec("_wall_h", (0.0, -half - wall_t / 2), (0.0, -half - wall_t / 2),
                             static=True))
        x0 = length / 2 + 2.0
        second = names[1] if len(names) > 1 else names[0]
        out.append(AgentSpec(names[0], (-x0, 0.0), (x0, 0.0), orientation=0.0,
                             v_max=v_max))
        out.append(AgentSpec(second, (x0, 0.0), (-x0, 0.0),
                             orientation=math.pi, v_max=v_max))
    elif kind == "narrow_door":
        n = int(g.get("n", 12))
        gap = float(g.get("gap", 2.2))
        wall_len = float(g.get("wall_length", 10.0))
        wall_t = float(g.get("wall_thickness", 1.0))
        names = g.get("shapes") or list(sc.shapes) or ["disc"]
        v_max = float(g.get("v_max", 1.5))
        sc.shapes.setdefault("_wall_d", rectangle_contour(wall_len, wall_t))
        off = gap / 2 + wall_len / 2
        out.append(AgentSpec("_wall_d", (-off, 0.0), (-off, 0.0), static=True))
        out.append(AgentSpec("_wall_d", (off, 0.0), (off, 0.0), static=True))
        cols = max(1, int(math.ceil(n / 4)))
        k = 0
        y0 = wall_t + 2.0
        while k < n:
            row, col = divmod(k, cols)
            x = (col - (cols - 1) / 2) * 2.2
            y = -(y0 + row * 2.2)
            out.append(AgentSpec(names[k % len(names)], (x, y), (x, y0 + 6.0 + row * 2.2),
                                 orientation=math.pi / 2, v_max=v_max))
            k += 1
    return out


def expand_scenario(sc: Scenario):
    """Explicit agents plus generated ones, in document order."""
    rng = np.random.default_rng(sc.seed)
    specs = list(sc.agents)
    for g in sc.generators:
        specs.extend(_expand_generator(g, sc, rng))
    return specs


def build_world(sc: Scenario, mode="ctmat", table=None,
                shape_cache: dict | None = None,
                build_params: BuildParams | None = None) -> World:
    """Build every referenced shape (or take it from `shape_cache`) and
    assemble the world."""
    specs = expand_scenario(sc)
    shapes: dict[str, MedialShape] = dict(shape_cache or {})
    for name, contour in sc.shapes.items():
        if name not in shapes:
            shapes[name] = build_shape(contour, build_params, name=name)
    agents = []
    for k, spec in enumerate(specs):
        if spec.shape not in shapes:
            raise SchemaError(f"agent #{k}: unknown shape name {spec.shape!r}")
        agents.append(make_agent(k, shapes[spec.shape], spec.position,
                                 spec.orientation, spec.goal, spec.v_max,
                                 static=spec.static, mode=mode))
    world = World(agents, sc.world, table=table, mode=mode)
    world.shapes = shapes
    return world
