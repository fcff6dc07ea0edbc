"""Velocity obstacles built from Minkowski outlines, reciprocal half-plane
constraints, and low-dimensional linear programs for velocity selection.
"""

from __future__ import annotations

import math

from .geom import (
    TAU, Arc, GeometryError, Outline, Segment, closest_point_on_piece, dirvec,
    dist, outline_contains, ray_outline_entry, scale_outline, unit,
)
from .minkowski import lookup, minkowski_two_tuples


class HalfPlane:
    """Permitted-velocity constraint: v satisfies it iff (v - point).normal >= 0."""

    __slots__ = ("point", "normal")

    def __init__(self, point, normal):
        self.point = point
        self.normal = normal

    def violation(self, v):
        """Positive when v is on the forbidden side."""
        return (self.point[0] - v[0]) * self.normal[0] + (self.point[1] - v[1]) * self.normal[1]

    def __repr__(self):
        return f"HalfPlane(point={self.point}, normal={self.normal})"


class ConstraintSet:
    __slots__ = ("halfplanes", "v_max", "pre_count")

    def __init__(self, halfplanes, v_max, pre_count=0):
        self.halfplanes = halfplanes
        self.v_max = v_max
        self.pre_count = pre_count

    def __len__(self):
        return len(self.halfplanes)


class VelocityResult:
    __slots__ = ("velocity", "feasible")

    def __init__(self, velocity, feasible):
        self.velocity = velocity
        self.feasible = feasible

    def __repr__(self):
        return f"VelocityResult({self.velocity}, feasible={self.feasible})"


# ---------------------------------------------------------------------------
# velocity obstacle cone

class VelocityObstacle:
    """Truncated cone of colliding relative velocities.

    `forward` holds the origin-facing boundary pieces of M scaled by 1/tau,
    `legs` the two tangent rays (start point on the truncation, unit
    direction).  With `overlap` set the agents already intersect and
    `forward` holds the whole escape outline M/escape_horizon instead.
    """

    __slots__ = ("outline", "tau", "overlap", "forward", "legs", "scaled")

    def __init__(self, outline, tau, overlap, forward, legs, scaled):
        self.outline = outline
        self.tau = tau
        self.overlap = overlap
        self.forward = forward
        self.legs = legs
        self.scaled = scaled

    def contains(self, v):
        """Eq. membership: exists t in [0, tau] with t*v inside M."""
        if self.overlap:
            return True
        t_in = ray_outline_entry(self.outline, v)
        return t_in is not None and t_in <= self.tau * (1.0 + 1e-12)


def _visible_subarcs(piece: Arc):
    """Portions of an arc whose outward normal faces the origin."""
    dc = math.hypot(piece.c[0], piece.c[1])
    if dc <= piece.r + 1e-15:
        return []
    gamma = math.acos(max(-1.0, min(1.0, piece.r / dc)))
    v0 = math.atan2(piece.c[1], piece.c[0]) + gamma
    vspan = TAU - 2.0 * gamma
    rel = (piece.a0 - v0) % TAU
    out = []
    for lo, hi in ((rel, rel + piece.span), (rel - TAU, rel - TAU + piece.span)):
        lo2 = max(lo, 0.0)
        hi2 = min(hi, vspan)
        if hi2 - lo2 > 1e-12:
            out.append(Arc(piece.c, piece.r, v0 + lo2, hi2 - lo2))
    return out


def _tangent_legs(discs, tau):
    """Tangent rays from the origin to the hull of `discs`, scaled onto the
    1/tau truncation.  Returns ((start, dir), (start, dir)) as (low, high)."""
    ref = math.atan2(sum(d.c[1] for d in discs), sum(d.c[0] for d in discs))
    lo = math.inf
    hi = -math.inf
    lo_d = hi_d = None
    for d in discs:
        dc = math.hypot(d.c[0], d.c[1])
        half = math.asin(min(1.0, d.r / dc)) if dc > d.r else math.pi / 2
        base = math.atan2(d.c[1], d.c[0]) - ref
        base = (base + math.pi) % TAU - math.pi
        if base - half < lo:
            lo = base - half
            lo_d = d
        if base + half > hi:
            hi = base + half
            hi_d = d
    legs = []
    for ang, d, side in ((ref + lo, lo_d, -1.0), (ref + hi, hi_d, 1.0)):
        u = dirvec(ang)
        # outward normal: right of the ray for the low leg, left for the high
        n_out = (u[1], -u[0]) if side < 0 else (-u[1], u[0])
        start = ((d.c[0] + d.r * n_out[0]) / tau, (d.c[1] + d.r * n_out[1]) / tau)
        legs.append((start, u, n_out))
    return legs[0], legs[1]


def velocity_obstacle(M: Outline, tau: float, escape_horizon: float | None = None) -> VelocityObstacle:
    """Build the truncated VO cone for horizon tau.  When the origin lies in
    M the agents currently overlap; the cone is flagged and the whole plane
    is treated as forbidden, with an escape region M/escape_horizon."""
    if tau <= 0:
        raise GeometryError("tau must be positive")
    overlap = outline_contains(M, (0.0, 0.0))
    if overlap:
        horizon = escape_horizon if escape_horizon else tau
        scaled = scale_outline(M, 1.0 / horizon)
        return VelocityObstacle(M, tau, True, list(scaled.pieces), None, scaled)
    scaled = scale_outline(M, 1.0 / tau)
    forward = []
    for piece in scaled.pieces:
        if isinstance(piece, Segment):
            dx = piece.b[0] - piece.a[0]
            dy = piece.b[1] - piece.a[1]
            ln = math.hypot(dx, dy)
            if ln < 1e-15:
                continue
            nx, ny = dy / ln, -dx / ln
            if nx * piece.a[0] + ny * piece.a[1] < 0.0:
                forward.append(piece)
        else:
            forward.extend(_visible_subarcs(piece))
    if M.discs is None:
        raise GeometryError("VO needs generator discs on the outline")
    legs = _tangent_legs(M.discs, tau)
    return VelocityObstacle(M, tau, False, forward, legs, scaled)


def _piece_normal_at(piece, q):
    if isinstance(piece, Segment):
        dx = piece.b[0] - piece.a[0]
        dy = piece.b[1] - piece.a[1]
        ln = math.hypot(dx, dy)
        return (dy / ln, -dx / ln)
    return unit((q[0] - piece.c[0], q[1] - piece.c[1]))


def _nearest_on_boundary(cone: VelocityObstacle, p):
    """Nearest point of the VO boundary (forward face plus legs) and the
    outward normal there."""
    best = None
    for piece in cone.forward:
        q = closest_point_on_piece(piece, p)
        d = dist(p, q)
        if best is None or d < best[0] - 1e-15:
            best = (d, q, _piece_normal_at(piece, q))
    if cone.legs is not None:
        for start, u, n_out in cone.legs:
            t = max(0.0, (p[0] - start[0]) * u[0] + (p[1] - start[1]) * u[1])
            q = (start[0] + t * u[0], start[1] + t * u[1])
            d = dist(p, q)
            if best is None or d < best[0] - 1e-15:
                best = (d, q, n_out)
    return best


def orca_halfplane(v_a, v_b, cone: VelocityObstacle, share: float,
                   prune_speed: float | None = None) -> HalfPlane | None:
    """Reciprocal permitted-velocity half-plane for an agent against one
    neighbor tuple pair.  `share` is 0.5 for mutual agents, 1.0 against a
    static obstacle.

    The correction u runs from the relative velocity to the nearest point of
    the truncated cone's boundary; the permitted side faces away from the
    cone.  With `prune_speed` set, half-planes already satisfied over that
    whole speed disc (the relative velocity is far outside the cone) are
    dropped as None; keeping near-boundary constraints even when currently
    satisfied is what makes grazing states stable under discrete stepping.
    """
    v_rel = (v_a[0] - v_b[0], v_a[1] - v_b[1])
    if cone.overlap:
        inside = outline_contains(cone.scaled, v_rel)
    else:
        t_in = ray_outline_entry(cone.outline, v_rel)
        inside = t_in is not None and t_in <= cone.tau * (1.0 + 1e-12)
    got = _nearest_on_boundary(cone, v_rel)
    if got is None:
        return None
    d, q, n_at = got
    u = (q[0] - v_rel[0], q[1] - v_rel[1])
    if d < 1e-12:
        n = n_at
    else:
        n = unit(u) if inside else (-u[0] / d, -u[1] / d)
    hp = HalfPlane((v_a[0] + share * u[0], v_a[1] + share * u[1]), n)
    if prune_speed is not None and not inside:
        # worst violation over the reachable speed disc; negative means the
        # constraint cannot bind this step
        if hp.point[0] * n[0] + hp.point[1] * n[1] + prune_speed < -1e-12:
            return None
    return hp


def collect_constraints(tuples_a, vel_a, neighbors, tau, v_max,
                        table=None, dt=0.1) -> ConstraintSet:
    """One candidate half-plane per (agent tuple, neighbor tuple) pair over
    all neighbors, in the caller's (deterministic) neighbor order.

    `neighbors` is a sequence of (tuples, velocity, static_flag) triples.
    Pruned None results are dropped; pre_count records the pair count before
    pruning.
    """
    halfplanes = []
    pre = 0
    for tuples_b, vel_b, is_static in neighbors:
        share = 1.0 if is_static else 0.5
        for ta in tuples_a:
            for tb in tuples_b:
                pre += 1
                M = lookup(table, ta, tb) if table is not None else minkowski_two_tuples(ta, tb)
                cone = velocity_obstacle(M, tau, escape_horizon=dt)
                hp = orca_halfplane(vel_a, vel_b, cone, share, prune_speed=v_max)
                if hp is not None:
                    halfplanes.append(hp)
    return ConstraintSet(halfplanes, v_max, pre)


# ---------------------------------------------------------------------------
# incremental linear programs (directed-line form, permitted side on the left)

class _Line:
    __slots__ = ("point", "direction")

    def __init__(self, point, direction):
        self.point = point
        self.direction = direction


def _to_line(hp: HalfPlane) -> _Line:
    n = hp.normal
    return _Line(hp.point, (n[1], -n[0]))


def _det(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _lp1(lines, i, radius, opt_v, dir_opt):
    line = lines[i]
    dot_p = line.point[0] * line.direction[0] + line.point[1] * line.direction[1]
    disc = dot_p * dot_p + radius * radius - (line.point[0] ** 2 + line.point[1] ** 2)
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    t_left = -dot_p - sq
    t_right = -dot_p + sq
    for j in range(i):
        other = lines[j]
        den = _det(line.direction, other.direction)
        num = _det(other.direction,
                   (line.point[0] - other.point[0], line.point[1] - other.point[1]))
        if abs(den) <= 1e-12:
            if num < 0.0:
                return None
            continue
        t = num / den
        if den >= 0.0:
            t_right = min(t_right, t)
        else:
            t_left = max(t_left, t)
        if t_left > t_right:
            return None
    if dir_opt:
        if opt_v[0] * line.direction[0] + opt_v[1] * line.direction[1] > 0.0:
            t = t_right
        else:
            t = t_left
    else:
        t = (line.direction[0] * (opt_v[0] - line.point[0])
             + line.direction[1] * (opt_v[1] - line.point[1]))
        t = max(t_left, min(t_right, t))
    return (line.point[0] + t * line.direction[0], line.point[1] + t * line.direction[1])


def _lp2(lines, radius, opt_v, dir_opt):
    if dir_opt:
        result = (opt_v[0] * radius, opt_v[1] * radius)
    elif opt_v[0] ** 2 + opt_v[1] ** 2 > radius * radius:
        u = unit(opt_v)
        result = (u[0] * radius, u[1] * radius)
    else:
        result = opt_v
    for i, line in enumerate(lines):
        if _det(line.direction, (result[0] - line.point[0], result[1] - line.point[1])) < 0.0:
            new = _lp1(lines, i, radius, opt_v, dir_opt)
            if new is None:
                return result, i
            result = new
    return result, len(lines)


def solve_velocity(cs: ConstraintSet, v_pref, v_max: float) -> VelocityResult:
    """Closest point to v_pref in the intersection of the half-planes with
    the speed disc, via the incremental LP over the fixed constraint order.
    On infeasibility the partial result is returned with feasible=False (the
    caller is expected to run fallback_velocity)."""
    if v_max <= 0:
        raise GeometryError("v_max must be positive")
    lines = [_to_line(hp) for hp in cs.halfplanes]
    result, fail = _lp2(lines, v_max, v_pref, False)
    return VelocityResult(result, fail == len(lines))


def max_violation(cs: ConstraintSet, v) -> float:
    out = 0.0
    for hp in cs.halfplanes:
        out = max(out, hp.violation(v))
    return out


def fallback_velocity(cs: ConstraintSet, v_current, v_max: float) -> VelocityResult:
    """Velocity in the speed disc minimizing the maximum signed violation
    across all half-planes; ties resolve toward v_current.

    Solved by bisecting the violation level and re-running the feasibility LP
    with every half-plane relaxed by that level."""
    if not cs.halfplanes:
        return VelocityResult(v_current, False)

    def relaxed(z):
        out = []
        for hp in cs.halfplanes:
            p = (hp.point[0] - z * hp.normal[0], hp.point[1] - z * hp.normal[1])
            out.append(_to_line(HalfPlane(p, hp.normal)))
        return out

    z_hi = 0.0
    for hp in cs.halfplanes:
        z_hi = max(z_hi, hp.violation((0.0, 0.0)) + v_max)
    z_lo = 0.0
    res_hi, fail = _lp2(relaxed(z_hi), v_max, v_current, False)
    if fail != len(cs.halfplanes):
        # numeric corner: even fully relaxed is reported infeasible
        return VelocityResult(res_hi, False)
    best = res_hi
    scale = max(z_hi, 1.0)
    for _ in range(60):
        if z_hi - z_lo <= 1e-13 * scale:
            break
        mid = 0.5 * (z_lo + z_hi)
        res, fail = _lp2(relaxed(mid), v_max, v_current, False)
        if fail == len(cs.halfplanes):
            z_hi = mid
            best = res
        else:
            z_lo = mid
    return VelocityResult(best, False)
