"""World state, spatial neighbor queries, the two-phase simulation step,
exact polygon collision oracle, and false-positive metrics.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .geom import (
    Circle, GeometryError, dist, transform_circle, transform_point,
    transform_tuple, make_tuple,
)
from .medial import MedialShape
from .orientation import (
    AgentHull, WidthTable, build_width_table, convex_hull_of_tuples,
    discs_overlap_discs, update_orientation,
)
from .rvo import collect_constraints, fallback_velocity, solve_velocity


class EmptyRun(GeometryError):
    pass


@dataclass
class WorldParams:
    dt: float = 0.1
    tau: float = 2.0
    neighbor_dist: float | None = None   # default: 10 x max bounding radius
    max_neighbors: int = 10
    omega_max: float = math.pi
    goal_tolerance_frac: float = 0.1
    clearance_margin_frac: float = 0.02


class AgentState:
    """Positioned agent: canonical shape reference plus pose, velocities and
    goal.  `rep_tuples` holds the avoidance representation (the shape's
    tuples, or its enclosing disc in disc mode)."""

    __slots__ = ("id", "shape", "rep_tuples", "hull", "width_table", "pos",
                 "theta", "pref_theta", "vel", "pref_vel", "goal", "v_max",
                 "static", "bound_radius", "reached", "feasible")

    def __init__(self, agent_id, shape: MedialShape, rep_tuples, hull, width_table,
                 pos, theta, goal, v_max, static=False):
        self.id = agent_id
        self.shape = shape
        self.rep_tuples = rep_tuples
        self.hull = hull
        self.width_table = width_table
        self.pos = (float(pos[0]), float(pos[1]))
        self.theta = float(theta)
        self.pref_theta = float(theta)
        self.vel = (0.0, 0.0)
        self.pref_vel = (0.0, 0.0)
        self.goal = (float(goal[0]), float(goal[1]))
        self.v_max = float(v_max)
        self.static = static
        self.bound_radius = max(math.hypot(*c.c) + c.r
                                for t in rep_tuples for c in t.circles())
        self.reached = static
        self.feasible = True


def make_agent(agent_id, shape: MedialShape, pos, theta, goal, v_max,
               static=False, mode="ctmat") -> AgentState:
    """Build an agent for the given representation mode; the disc baseline is
    the enclosing circle run through the same machinery as a degenerate
    tuple."""
    if mode == "disc":
        mec = shape.enclosing_circle()
        rep = [make_tuple(mec, Circle(mec.c, mec.r))]
    elif mode == "ctmat":
        rep = list(shape.tuples)
    else:
        raise GeometryError(f"unknown representation mode {mode!r}")
    hull = convex_hull_of_tuples(rep)
    table = build_width_table(hull)
    return AgentState(agent_id, shape, rep, hull, table, pos, theta, goal,
                      v_max, static)


@dataclass
class StepMetrics:
    step: int
    wall_time: float
    n_feasible: int
    n_fallback: int
    constraints_predicted: list
    constraints_pre: list
    constraints_kept: int
    bounding_pairs: int = 0
    exact_pairs: int = 0
    false_positive_pairs: int = 0


@dataclass
class MetricsReport:
    mode: str
    steps: int
    per_step: list
    bounding_total: int = 0
    exact_total: int = 0
    fp_total: int = 0
    fp_ratio: float = 0.0
    empty_denominator: bool = False

    def summary(self):
        mean_t = (sum(m.wall_time for m in self.per_step) / len(self.per_step)
                  if self.per_step else 0.0)
        return {
            "mode": self.mode,
            "steps": self.steps,
            "mean_frame_time": mean_t,
            "feasible": sum(m.n_feasible for m in self.per_step),
            "fallback": sum(m.n_fallback for m in self.per_step),
            "bounding_pairs": self.bounding_total,
            "exact_pairs": self.exact_total,
            "false_positive_pairs": self.fp_total,
            "fp_ratio": self.fp_ratio,
            "fp_empty_denominator": self.empty_denominator,
        }


class World:
    def __init__(self, agents, params: WorldParams | None = None, table=None,
                 mode="ctmat"):
        self.agents = list(agents)
        self.params = params or WorldParams()
        self.table = table
        self.mode = mode
        self.step_index = 0
        self.metrics = []
        if self.params.neighbor_dist is None:
            rmax = max((a.bound_radius for a in self.agents), default=1.0)
            self.params.neighbor_dist = 10.0 * rmax

    def world_tuples(self, i):
        a = self.agents[i]
        return [transform_tuple(t, a.pos, a.theta) for t in a.rep_tuples]

    def world_polygon(self, i):
        a = self.agents[i]
        ct, st = math.cos(a.theta), math.sin(a.theta)
        return [transform_point(p, a.pos, ct, st) for p in a.shape.polygon]

    def all_reached(self):
        return all(a.reached for a in self.agents)


def query_neighbors(world: World, agent_index: int, max_dist=None, max_count=None,
                    tree=None):
    """Up to max_count nearest agents by center distance minus bounding
    radii, within max_dist of the agent center; deterministic order."""
    p = world.params
    max_dist = p.neighbor_dist if max_dist is None else max_dist
    max_count = p.max_neighbors if max_count is None else max_count
    a = world.agents[agent_index]
    if tree is None:
        tree = cKDTree([ag.pos for ag in world.agents])
    idx = sorted(tree.query_ball_point(a.pos, max_dist))
    ranked = []
    for j in idx:
        if j == agent_index:
            continue
        b = world.agents[j]
        ranked.append((dist(a.pos, b.pos) - a.bound_radius - b.bound_radius, b.id, j))
    ranked.sort()
    return [j for _, _, j in ranked[:max_count]]


def preferred_velocity(agent: AgentState, dt: float):
    """Full speed toward the goal, ramped down linearly inside the last
    v_max*dt; zero at the goal and for static agents."""
    if agent.static:
        return (0.0, 0.0)
    dx = agent.goal[0] - agent.pos[0]
    dy = agent.goal[1] - agent.pos[1]
    d = math.hypot(dx, dy)
    if d < 1e-12:
        return (0.0, 0.0)
    speed = agent.v_max * min(1.0, d / (agent.v_max * dt))
    return (dx / d * speed, dy / d * speed)


def corridor_gap(pos, v_new, static_states, lookahead):
    """Perpendicular free gap between static obstacles on both sides of the
    motion ray within the lookahead; None when a side is unbounded."""
    speed = math.hypot(v_new[0], v_new[1])
    if speed < 1e-9 or not static_states:
        return None
    dx, dy = v_new[0] / speed, v_new[1] / speed
    nx, ny = -dy, dx
    left = math.inf
    right = -math.inf
    for discs in static_states:
        alo = math.inf
        ahi = -math.inf
        olo = math.inf
        ohi = -math.inf
        for c in discs:
            rx = c.c[0] - pos[0]
            ry = c.c[1] - pos[1]
            along = rx * dx + ry * dy
            off = rx * nx + ry * ny
            alo = min(alo, along - c.r)
            ahi = max(ahi, along + c.r)
            olo = min(olo, off - c.r)
            ohi = max(ohi, off + c.r)
        if ahi < 0.0 or alo > lookahead:
            continue
        if olo <= 0.0 <= ohi:
            continue
        if olo > 0.0:
            left = min(left, olo)
        else:
            right = max(right, ohi)
    if math.isinf(left) or math.isinf(right):
        return None
    return left - right


def step(world: World):
    """Two-phase update: all decisions read the same immutable snapshot,
    then positions/velocities/orientations commit together."""
    p = world.params
    agents = world.agents
    n = len(agents)
    t_start = time.perf_counter()
    tree = cKDTree([a.pos for a in agents])
    wtuples = [world.world_tuples(i) for i in range(n)]
    wdiscs = []
    for i, a in enumerate(agents):
        ct, st = math.cos(a.theta), math.sin(a.theta)
        wdiscs.append([transform_circle(c, a.pos, ct, st) for c in a.hull.discs])

    decisions = []
    predicted = []
    pre_counts = []
    kept = 0
    n_feasible = 0
    n_fallback = 0
    for i, a in enumerate(agents):
        if a.static:
            decisions.append(((0.0, 0.0), a.theta, True))
            predicted.append(0)
            pre_counts.append(0)
            continue
        nbrs = query_neighbors(world, i, tree=tree)
        vpref = preferred_velocity(a, p.dt)
        views = [(wtuples[j], agents[j].vel, agents[j].static) for j in nbrs]
        cs = collect_constraints(wtuples[i], a.vel, views, p.tau, a.v_max,
                                 world.table, p.dt)
        res = solve_velocity(cs, vpref, a.v_max)
        if not res.feasible:
            res = fallback_velocity(cs, res.velocity, a.v_max)
        v_new = res.velocity
        predicted.append(len(wtuples[i]) * sum(len(wtuples[j]) for j in nbrs))
        pre_counts.append(cs.pre_count)
        kept += len(cs.halfplanes)
        if res.feasible:
            n_feasible += 1
        else:
            n_fallback += 1

        statics = [wdiscs[j] for j in nbrs if agents[j].static]
        corridor = corridor_gap(a.pos, v_new, statics,
                                math.hypot(*v_new) * p.tau)
        world_hull = AgentHull(None, wdiscs[i])
        wt = _OffsetWidth(a.width_table, a)
        theta_new = update_orientation(
            a.theta, v_new, world_hull, wt, a.pos, p.dt, p.omega_max,
            neighbor_discs=[_tuple_discs(wtuples[j]) for j in nbrs],
            corridor_width=corridor,
            clearance_margin=p.clearance_margin_frac * a.width_table.max_width)
        decisions.append((v_new, theta_new, res.feasible))

    for a, (v_new, theta_new, feasible) in zip(agents, decisions):
        if a.static:
            continue
        a.pos = (a.pos[0] + v_new[0] * p.dt, a.pos[1] + v_new[1] * p.dt)
        a.vel = v_new
        a.theta = theta_new
        a.feasible = feasible
        if dist(a.pos, a.goal) <= p.goal_tolerance_frac * a.bound_radius:
            a.reached = True

    world.step_index += 1
    world.metrics.append(StepMetrics(
        step=world.step_index,
        wall_time=time.perf_counter() - t_start,
        n_feasible=n_feasible,
        n_fallback=n_fallback,
        constraints_predicted=predicted,
        constraints_pre=pre_counts,
        constraints_kept=kept,
    ))
    return world


class _OffsetWidth:
    """Width table view at the agent's current orientation: world direction
    queries shift back into the canonical frame."""

    __slots__ = ("table", "agent")

    def __init__(self, table: WidthTable, agent):
        self.table = table
        self.agent = agent

    @property
    def min_width(self):
        return self.table.min_width

    @property
    def max_width(self):
        return self.table.max_width

    def query(self, theta):
        return self.table.query(theta - self.agent.theta)


def _tuple_discs(tuples):
    out = []
    for t in tuples:
        out.extend(t.circles())
    return out


# ---------------------------------------------------------------------------
# exact polygon collision oracle

def _point_in_polygon_batch(pts, poly):
    pts = np.asarray(pts)
    poly = np.asarray(poly)
    a = poly
    b = np.roll(poly, -1, axis=0)
    x = pts[:, 0][:, None]
    y = pts[:, 1][:, None]
    ax, ay = a[:, 0][None, :], a[:, 1][None, :]
    bx, by = b[:, 0][None, :], b[:, 1][None, :]
    cond = (ay > y) != (by > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xx = ax + (y - ay) * (bx - ax) / np.where(by == ay, 1.0, by - ay)
    crossings = (cond & (x < xx)).sum(axis=1)
    inside = (crossings % 2) == 1
    # boundary points count as inside
    d = b - a
    ln2 = (d * d).sum(axis=1)[None, :]
    t = ((x - ax) * d[:, 0][None, :] + (y - ay) * d[:, 1][None, :]) / np.where(ln2 == 0, 1.0, ln2)
    t = np.clip(t, 0.0, 1.0)
    qx = ax + t * d[:, 0][None, :]
    qy = ay + t * d[:, 1][None, :]
    dd = np.hypot(x - qx, y - qy)
    on_edge = (dd <= 1e-12).any(axis=1)
    return inside | on_edge


def exact_collision_oracle(poly_a, poly_b) -> bool:
    """True iff edges intersect or one polygon contains a vertex of the
    other (boundary contact counts)."""
    A = np.asarray(poly_a)
    B = np.asarray(poly_b)
    if (A[:, 0].max() < B[:, 0].min() or B[:, 0].max() < A[:, 0].min()
            or A[:, 1].max() < B[:, 1].min() or B[:, 1].max() < A[:, 1].min()):
        return False
    a0 = A
    a1 = np.roll(A, -1, axis=0)
    b0 = B
    b1 = np.roll(B, -1, axis=0)
    d1 = (a1 - a0)[:, None, :]
    d2 = (b1 - b0)[None, :, :]
    w0 = b0[None, :, :] - a0[:, None, :]
    w1 = b1[None, :, :] - a0[:, None, :]
    o1 = d1[..., 0] * w0[..., 1] - d1[..., 1] * w0[..., 0]
    o2 = d1[..., 0] * w1[..., 1] - d1[..., 1] * w1[..., 0]
    v0 = a0[:, None, :] - b0[None, :, :]
    v1 = a1[:, None, :] - b0[None, :, :]
    o3 = d2[..., 0] * v0[..., 1] - d2[..., 1] * v0[..., 0]
    o4 = d2[..., 0] * v1[..., 1] - d2[..., 1] * v1[..., 0]
    if np.any((o1 * o2 < 0) & (o3 * o4 < 0)):
        return True
    if _point_in_polygon_batch(A, B).any():
        return True
    if _point_in_polygon_batch(B, A).any():
        return True
    return False


def bounding_overlap(tuples_a, tuples_b) -> bool:
    """Representation-level collision: any tuple pair overlaps."""
    for ta in tuples_a:
        for tb in tuples_b:
            if discs_overlap_discs(ta.circles(), tb.circles()):
                return True
    return False


def collision_counts(world: World):
    """(bounding pairs, exact pairs, fp pairs) at the current world state."""
    n = len(world.agents)
    wtuples = [world.world_tuples(i) for i in range(n)]
    polys = [world.world_polygon(i) for i in range(n)]
    bounding = exact = fp = 0
    for i in range(n):
        ai = world.agents[i]
        for j in range(i + 1, n):
            aj = world.agents[j]
            if dist(ai.pos, aj.pos) > ai.bound_radius + aj.bound_radius:
                continue
            bd = bounding_overlap(wtuples[i], wtuples[j])
            if not bd:
                continue
            bounding += 1
            ex = exact_collision_oracle(polys[i], polys[j])
            if ex:
                exact += 1
            else:
                fp += 1
    return bounding, exact, fp


# ---------------------------------------------------------------------------
# run loop, logs and reports

LOG_COLUMNS = "step,id,x,y,vx,vy,theta,feasible"


def log_row(step_idx, agent: AgentState):
    return (step_idx, agent.id, agent.pos[0], agent.pos[1],
            agent.vel[0], agent.vel[1], agent.theta, 1 if agent.feasible else 0)


def format_log_rows(rows):
    lines = [LOG_COLUMNS]
    for r in rows:
        lines.append(f"{r[0]},{r[1]},{r[2]!r},{r[3]!r},{r[4]!r},{r[5]!r},{r[6]!r},{r[7]}")
    return "\n".join(lines) + "\n"


def run(world: World, steps: int, record_collisions=False, frame_hook=None,
        stop_when_reached=True):
    """Advance the world `steps` steps (or until every agent reached its
    goal); returns the trajectory log rows."""
    rows = [log_row(0, a) for a in world.agents]
    if frame_hook is not None:
        frame_hook(world, 0)
    for k in range(steps):
        step(world)
        if record_collisions:
            b, e, f = collision_counts(world)
            m = world.metrics[-1]
            m.bounding_pairs = b
            m.exact_pairs = e
            m.false_positive_pairs = f
        rows.extend(log_row(world.step_index, a) for a in world.agents)
        if frame_hook is not None:
            frame_hook(world, world.step_index)
        if stop_when_reached and world.all_reached():
            break
    return rows


def metrics_report(world: World) -> MetricsReport:
    per = world.metrics
    rep = MetricsReport(mode=world.mode, steps=len(per), per_step=per)
    rep.bounding_total = sum(m.bounding_pairs for m in per)
    rep.exact_total = sum(m.exact_pairs for m in per)
    rep.fp_total = sum(m.false_positive_pairs for m in per)
    if rep.bounding_total > 0:
        rep.fp_ratio = rep.fp_total / rep.bounding_total
    else:
        rep.empty_denominator = True
        rep.fp_ratio = 0.0
    return rep


def replay_collision_metrics(rows, agents_by_id, mode="ctmat"):
    """Recompute bounding/exact/false-positive counts for logged states under
    the given representation; agents_by_id maps id -> (shape, v_max).

    Used to compare representation tightness on identical trajectories.
    """
    if not rows or len(rows) <= 0:
        raise EmptyRun("trajectory log is empty")
    by_step = {}
    for r in rows:
        by_step.setdefault(r[0], []).append(r)
    reps = {}
    polys = {}
    for aid, shape in agents_by_id.items():
        if mode == "disc":
            mec = shape.enclosing_circle()
            reps[aid] = [make_tuple(mec, Circle(mec.c, mec.r))]
        else:
            reps[aid] = list(shape.tuples)
        polys[aid] = shape.polygon
    bounding = exact = fp = 0
    for s in sorted(by_step):
        states = by_step[s]
        placed = []
        for (_s, aid, x, y, _vx, _vy, th, _f) in states:
            tups = [transform_tuple(t, (x, y), th) for t in reps[aid]]
            ct, st = math.cos(th), math.sin(th)
            poly = [transform_point(p, (x, y), ct, st) for p in polys[aid]]
            rad = max(math.hypot(*c.c) + c.r for t in tups for c in t.circles())
            placed.append(((x, y), rad, tups, poly))
        for i in range(len(placed)):
            for j in range(i + 1, len(placed)):
                (pi, ri, ti, qi) = placed[i]
                (pj, rj, tj, qj) = placed[j]
                if dist(pi, pj) > ri + rj:
                    continue
                if not bounding_overlap(ti, tj):
                    continue
                bounding += 1
                if exact_collision_oracle(qi, qj):
                    exact += 1
                else:
                    fp += 1
    return bounding, exact, fp


def false_positive_report(rows, agents_by_id, mode="ctmat") -> MetricsReport:
    """False-positive ratio of the bounding representation against the exact
    polygon oracle over a completed run's logged trajectory."""
    if not rows:
        raise EmptyRun("trajectory log is empty")
    b, e, f = replay_collision_metrics(rows, agents_by_id, mode)
    rep = MetricsReport(mode=mode, steps=len({r[0] for r in rows}), per_step=[])
    rep.bounding_total = b
    rep.exact_total = e
    rep.fp_total = f
    if b > 0:
        rep.fp_ratio = f / b
    else:
        rep.empty_denominator = True
        rep.fp_ratio = 0.0
    return rep
