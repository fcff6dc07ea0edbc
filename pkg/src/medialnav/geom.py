"""Exact 2D primitives: circles, arcs, segments, outer tangents, and convex
outlines composed of arc/segment pieces.

Points and vectors are plain (x, y) float tuples.  Everything here is a pure
function on immutable values, so concurrent use needs no locking.
"""

from __future__ import annotations

import math

import numpy as np

TAU = 2.0 * math.pi
EPS = 1e-9  # chain closure / tangency tolerance, world units


class GeometryError(ValueError):
    pass


class ContainmentError(GeometryError):
    """One circle lies strictly inside the other, outer tangents do not exist."""


class DegenerateError(GeometryError):
    """Input is collinear or otherwise rank-deficient."""


# ---------------------------------------------------------------------------
# vector helpers

def vadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def vsub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def vscale(a, s):
    return (a[0] * s, a[1] * s)


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def norm(a):
    return math.hypot(a[0], a[1])


def dist(a, b):
    return math.hypot(a[0] - b[0], a[1] - b[1])


def unit(a, eps=1e-15):
    n = math.hypot(a[0], a[1])
    if n < eps:
        return (0.0, 0.0)
    return (a[0] / n, a[1] / n)


def perp(a):
    """Rotate by +90 degrees."""
    return (-a[1], a[0])


def dirvec(angle):
    return (math.cos(angle), math.sin(angle))


def angle_of(a):
    return math.atan2(a[1], a[0])


def norm_angle(a):
    """Normalize to [0, 2*pi)."""
    a = math.fmod(a, TAU)
    return a + TAU if a < 0.0 else a


def wrap_pi(a):
    """Normalize to (-pi, pi]."""
    a = math.fmod(a, TAU)
    if a <= -math.pi:
        a += TAU
    elif a > math.pi:
        a -= TAU
    return a


def rot(p, angle):
    c, s = math.cos(angle), math.sin(angle)
    return (c * p[0] - s * p[1], s * p[0] + c * p[1])


def rot_cs(p, c, s):
    return (c * p[0] - s * p[1], s * p[0] + c * p[1])


# ---------------------------------------------------------------------------
# primitive shapes

class Circle:
    __slots__ = ("c", "r")

    def __init__(self, c, r):
        if r < 0.0:
            raise GeometryError(f"negative radius {r}")
        self.c = (float(c[0]), float(c[1]))
        self.r = float(r)

    def __repr__(self):
        return f"Circle({self.c}, {self.r})"


class Arc:
    """Circular arc from angle a0 over `span` radians, traversed CCW.

    `ccw` is kept explicit rather than inferred from angle order; every arc in
    this library is stored CCW with span in (0, 2*pi].
    """

    __slots__ = ("c", "r", "a0", "span", "ccw")

    def __init__(self, c, r, a0, span, ccw=True):
        self.c = (float(c[0]), float(c[1]))
        self.r = float(r)
        self.a0 = norm_angle(a0)
        self.span = float(span)
        self.ccw = ccw

    @property
    def a1(self):
        return self.a0 + self.span

    def point_at(self, ang):
        return (self.c[0] + self.r * math.cos(ang), self.c[1] + self.r * math.sin(ang))

    @property
    def p0(self):
        return self.point_at(self.a0)

    @property
    def p1(self):
        return self.point_at(self.a0 + self.span)

    def length(self):
        return self.r * self.span

    def __repr__(self):
        return f"Arc(c={self.c}, r={self.r:.6g}, a0={self.a0:.6g}, span={self.span:.6g})"


class Segment:
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = (float(a[0]), float(a[1]))
        self.b = (float(b[0]), float(b[1]))

    @property
    def p0(self):
        return self.a

    @property
    def p1(self):
        return self.b

    def length(self):
        return dist(self.a, self.b)

    def __repr__(self):
        return f"Segment({self.a}, {self.b})"


class Outline:
    """Closed CCW chain of Arc/Segment pieces bounding a convex region.

    `discs`, when set, is the list of Circle generators whose convex hull the
    outline bounds; support queries use it as a fast path.
    """

    __slots__ = ("pieces", "discs", "provenance")

    def __init__(self, pieces, discs=None, provenance=None):
        self.pieces = list(pieces)
        self.discs = discs
        self.provenance = provenance

    def __repr__(self):
        return f"Outline({len(self.pieces)} pieces, provenance={self.provenance})"


def validate_outline(o, eps=1e-6):
    """Check chain closure: consecutive pieces share endpoints."""
    ps = o.pieces
    if not ps:
        raise GeometryError("empty outline")
    for k, piece in enumerate(ps):
        nxt = ps[(k + 1) % len(ps)]
        if dist(piece.p1, nxt.p0) > eps:
            raise GeometryError(f"outline not closed at piece {k}: {piece.p1} vs {nxt.p0}")
    return True


# ---------------------------------------------------------------------------
# two-circle interpolation unit

class MedialTuple:
    """Convex region interpolating two circles: two arcs joined by the two
    outer tangent segments T1T2 and T3T4 (T1, T3 on the big circle).

    A coincident equal pair degenerates to a single circle and represents a
    plain disc agent.
    """

    __slots__ = ("big", "small", "t1", "t2", "t3", "t4", "axis_angle",
                 "degenerate", "type_key")

    def __init__(self, big, small, t1, t2, t3, t4, axis_angle, degenerate,
                 type_key=None):
        self.big = big
        self.small = small
        self.t1 = t1
        self.t2 = t2
        self.t3 = t3
        self.t4 = t4
        self.axis_angle = axis_angle
        self.degenerate = degenerate
        self.type_key = type_key

    def circles(self):
        if self.degenerate:
            return [self.big]
        return [self.big, self.small]

    def tangents(self):
        return [self.t1, self.t2, self.t3, self.t4]

    def outline(self):
        return disc_hull(self.circles())

    def bound_radius_about(self, p):
        r = 0.0
        for c in self.circles():
            r = max(r, dist(c.c, p) + c.r)
        return r

    def __repr__(self):
        return f"MedialTuple(big={self.big}, small={self.small}, degenerate={self.degenerate})"


def make_tuple(c_big: Circle, c_small: Circle) -> MedialTuple:
    """Interpolate two circles into the tuple bounded by their outer tangents.

    Raises ContainmentError when one circle lies strictly inside the other.
    Coincident equal circles yield the degenerate single-circle tuple.
    """
    if c_big.r < c_small.r:
        c_big, c_small = c_small, c_big
    d = dist(c_big.c, c_small.c)
    if d <= EPS and abs(c_big.r - c_small.r) <= EPS:
        c = c_big.c
        r = c_big.r
        top = (c[0], c[1] + r)
        bot = (c[0], c[1] - r)
        return MedialTuple(c_big, c_small, top, top, bot, bot, 0.0, True)
    if d + c_small.r < c_big.r - EPS:
        raise ContainmentError(
            f"circle {c_small} lies strictly inside {c_big} (d={d:.6g})")
    u = ((c_small.c[0] - c_big.c[0]) / d, (c_small.c[1] - c_big.c[1]) / d)
    theta = math.atan2(u[1], u[0])
    cos_a = (c_big.r - c_small.r) / d
    cos_a = max(-1.0, min(1.0, cos_a))
    alpha = math.acos(cos_a)
    n1 = dirvec(theta + alpha)
    n2 = dirvec(theta - alpha)
    t1 = vadd(c_big.c, vscale(n1, c_big.r))
    t2 = vadd(c_small.c, vscale(n1, c_small.r))
    t3 = vadd(c_big.c, vscale(n2, c_big.r))
    t4 = vadd(c_small.c, vscale(n2, c_small.r))
    return MedialTuple(c_big, c_small, t1, t2, t3, t4, theta, False)


def tuple_membership_value(t: MedialTuple, p) -> float:
    """min over s in [0,1] of |p - c(s)|^2 - r(s)^2 along the interpolation.

    Non-positive exactly on the tuple region (boundary included).
    """
    c0, r0 = t.big.c, t.big.r
    if t.degenerate:
        return (p[0] - c0[0]) ** 2 + (p[1] - c0[1]) ** 2 - r0 * r0
    c1, r1 = t.small.c, t.small.r
    dcx, dcy = c1[0] - c0[0], c1[1] - c0[1]
    dr = r1 - r0
    wx, wy = p[0] - c0[0], p[1] - c0[1]
    A = dcx * dcx + dcy * dcy - dr * dr
    B = -2.0 * (wx * dcx + wy * dcy) - 2.0 * r0 * dr
    C = wx * wx + wy * wy - r0 * r0
    best = min(C, A + B + C)
    if A > 0.0:
        s = -B / (2.0 * A)
        if 0.0 < s < 1.0:
            best = min(best, C - B * B / (4.0 * A))
    return best


def point_in_tuple(p, t: MedialTuple) -> bool:
    """True iff p lies in either circle or in the tangent quadrilateral
    (boundary counts as inside)."""
    return tuple_membership_value(t, p) <= 0.0


def tuple_point_distance(t: MedialTuple, p) -> float:
    """Distance from p to the tuple region (0 inside)."""
    c0, r0 = t.big.c, t.big.r
    if t.degenerate:
        return max(0.0, dist(p, c0) - r0)
    c1, r1 = t.small.c, t.small.r
    dcx, dcy = c1[0] - c0[0], c1[1] - c0[1]
    dr = r1 - r0
    wx, wy = p[0] - c0[0], p[1] - c0[1]
    a = dcx * dcx + dcy * dcy
    kappa = a - dr * dr
    if a < 1e-30 or kappa <= 1e-15 * a:
        # coincident or nested circles: the region is the big disc
        return max(0.0, dist(p, c0) - r0)
    b = wx * dcx + wy * dcy
    w2 = wx * wx + wy * wy
    # stationary point of |p - c(s)| - r(s): with tau = s*a - b the condition
    # tau = dr * rho(s) becomes tau = dr * D * sqrt(a / kappa), where D is the
    # distance from p to the center line (no cancellation)
    d2 = max(0.0, w2 - b * b / a)
    tau = dr * math.sqrt(d2 * a / kappa)
    cand = (0.0, 1.0, (b + tau) / a)
    best = math.inf
    for s in cand:
        if s < 0.0 or s > 1.0:
            continue
        cx = c0[0] + s * dcx
        cy = c0[1] + s * dcy
        val = math.hypot(p[0] - cx, p[1] - cy) - (r0 + s * dr)
        best = min(best, val)
    return max(0.0, best)


def tuple_contains_batch(t: MedialTuple, pts: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Vectorized membership for an (N, 2) point array."""
    c0 = np.asarray(t.big.c)
    r0 = t.big.r
    w = pts - c0
    if t.degenerate:
        return np.einsum("ij,ij->i", w, w) - r0 * r0 <= tol
    c1 = np.asarray(t.small.c)
    r1 = t.small.r
    dc = c1 - c0
    dr = r1 - r0
    A = float(dc @ dc) - dr * dr
    B = -2.0 * (w @ dc) - 2.0 * r0 * dr
    C = np.einsum("ij,ij->i", w, w) - r0 * r0
    best = np.minimum(C, A + B + C)
    if A > 0.0:
        s = -B / (2.0 * A)
        interior = (s > 0.0) & (s < 1.0)
        best = np.where(interior, np.minimum(best, C - B * B / (4.0 * A)), best)
    return best <= tol


def tuple_distance_batch(t: MedialTuple, pts: np.ndarray) -> np.ndarray:
    """Vectorized distance to the tuple region (0 inside) for (N, 2) points."""
    c0 = np.asarray(t.big.c)
    r0 = t.big.r
    w = pts - c0
    if t.degenerate:
        return np.maximum(0.0, np.sqrt(np.einsum("ij,ij->i", w, w)) - r0)
    c1 = np.asarray(t.small.c)
    r1 = t.small.r
    dc = c1 - c0
    dr = r1 - r0
    a = float(dc @ dc)
    kappa = a - dr * dr
    if a < 1e-30 or kappa <= 1e-15 * a:
        return np.maximum(0.0, np.sqrt(np.einsum("ij,ij->i", w, w)) - r0)

    def value_at(s):
        cx = c0 + np.multiply.outer(s, dc)
        diff = pts - cx
        return np.sqrt(np.einsum("ij,ij->i", diff, diff)) - (r0 + s * dr)

    best = np.minimum(value_at(np.zeros(len(pts))), value_at(np.ones(len(pts))))
    b = w @ dc
    w2 = np.einsum("ij,ij->i", w, w)
    d2 = np.maximum(0.0, w2 - b * b / a)
    tau = dr * np.sqrt(d2 * (a / kappa))
    s = (b + tau) / a
    mask = (s > 0.0) & (s < 1.0)
    if np.any(mask):
        sm = np.where(mask, s, 0.0)
        best = np.where(mask, np.minimum(best, value_at(sm)), best)
    return np.maximum(0.0, best)


def segment_outline_distance(seg: Segment, tuples) -> float:
    """Max over the two segment endpoints of the distance to the tuple-set
    region (0 when both endpoints lie inside)."""
    out = 0.0
    for p in (seg.a, seg.b):
        d = min(tuple_point_distance(t, p) for t in tuples)
        out = max(out, d)
    return out


# ---------------------------------------------------------------------------
# circumcircle

def circumcircle(a, b, c) -> Circle:
    """Circle through three non-collinear points."""
    ax, ay = a
    bx, by = b
    cx, cy = c
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    scale = max(dist(a, b), dist(b, c), dist(c, a))
    if abs(d) <= 1e-12 * max(scale * scale, 1.0):
        raise DegenerateError(f"collinear points {a}, {b}, {c}")
    a2 = ax * ax + ay * ay
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    return Circle((ux, uy), dist((ux, uy), a))


# ---------------------------------------------------------------------------
# convex hull of discs

def _prune_discs(discs, eps=1e-12):
    alive = []
    for i, d in enumerate(discs):
        redundant = False
        for j, e in enumerate(discs):
            if i == j:
                continue
            dd = dist(d.c, e.c)
            if dd + d.r <= e.r + eps:
                # strictly smaller, or equal disc with lower index wins
                if dd + d.r < e.r - eps or e.r > d.r + eps or j < i:
                    redundant = True
                    break
        if not redundant:
            alive.append(d)
    return alive


def _tangent_normal(ci, ri, cj, rj):
    """Normal angle of the CCW outer tangent from disc i to disc j, plus the
    tangent segment length.  Returns None when no outer tangent exists."""
    dx = cj[0] - ci[0]
    dy = cj[1] - ci[1]
    d2 = dx * dx + dy * dy
    delta = ri - rj
    s2 = d2 - delta * delta
    if s2 <= 0.0:
        return None
    s = math.sqrt(s2)
    phi = math.atan2(dy, dx) - math.atan2(s, delta)
    return norm_angle(phi), s


def disc_hull(discs, eps=1e-12) -> Outline:
    """Convex hull of a set of discs as a CCW arc/segment outline."""
    discs = _prune_discs(list(discs), eps)
    if not discs:
        raise GeometryError("no discs")
    if len(discs) == 1:
        d = discs[0]
        return Outline([Arc(d.c, d.r, 0.0, TAU)], discs=discs)

    start = max(range(len(discs)), key=lambda k: (discs[k].c[0] + discs[k].r, discs[k].c[0], -k))
    pieces = []
    cur = start
    psi = 0.0  # current normal angle, unwrapped from the +x support point
    guard = 4 * len(discs) + 8
    while guard > 0:
        guard -= 1
        best = None
        ci = discs[cur]
        for j, cj in enumerate(discs):
            if j == cur:
                continue
            tn = _tangent_normal(ci.c, ci.r, cj.c, cj.r)
            if tn is None:
                continue
            phi, s = tn
            adv = (phi - psi) % TAU
            if adv > TAU - 1e-9:
                adv = 0.0
            if best is None or adv < best[0] - 1e-12 or (adv < best[0] + 1e-12 and s > best[1]):
                best = (adv, s, j, phi)
        if best is None:
            raise GeometryError("disc hull walk found no transition")
        adv, _s, j, phi = best
        if psi + adv >= TAU - 1e-9:
            # close the walk back to the +x support point on the start disc
            if psi < TAU:
                pieces.append(Arc(ci.c, ci.r, psi, TAU - psi))
            break
        if adv > 1e-12:
            pieces.append(Arc(ci.c, ci.r, psi, adv))
        psi = psi + adv
        nang = norm_angle(psi)
        n = dirvec(nang)
        pa = vadd(ci.c, vscale(n, ci.r))
        pb = vadd(discs[j].c, vscale(n, discs[j].r))
        if dist(pa, pb) > eps:
            pieces.append(Segment(pa, pb))
        cur = j
    else:
        raise GeometryError("disc hull walk did not terminate")

    # merge the split arc around the +x support point
    if (len(pieces) > 1 and isinstance(pieces[0], Arc) and isinstance(pieces[-1], Arc)
            and pieces[0].c == pieces[-1].c and abs(pieces[0].r - pieces[-1].r) <= eps
            and abs(pieces[0].a0) <= 1e-12):
        first = pieces.pop(0)
        last = pieces.pop()
        pieces.append(Arc(last.c, last.r, last.a0, last.span + first.span))
    pieces = [p for p in pieces if not (isinstance(p, Arc) and p.r <= eps and p.span < TAU - 1e-9)]
    return Outline(pieces, discs=discs)


# ---------------------------------------------------------------------------
# outline queries (convex chains)

def _arc_max_support(piece: Arc, w):
    """max over the arc's normal range of u(psi) . w"""
    wa = math.atan2(w[1], w[0])
    rel = (wa - piece.a0) % TAU
    if rel <= piece.span:
        return math.hypot(w[0], w[1])
    u0 = dirvec(piece.a0)
    u1 = dirvec(piece.a0 + piece.span)
    return max(u0[0] * w[0] + u0[1] * w[1], u1[0] * w[0] + u1[1] * w[1])


def piece_violation(piece, p):
    """Signed violation of the piece's supporting constraints at p.

    Positive means p lies outside the convex region across this piece.
    """
    if isinstance(piece, Segment):
        dx = piece.b[0] - piece.a[0]
        dy = piece.b[1] - piece.a[1]
        ln = math.hypot(dx, dy)
        if ln < 1e-15:
            return -math.inf
        # outward normal of a CCW chain is the travel direction rotated -90deg
        nx, ny = dy / ln, -dx / ln
        return nx * (p[0] - piece.a[0]) + ny * (p[1] - piece.a[1])
    w = (p[0] - piece.c[0], p[1] - piece.c[1])
    return _arc_max_support(piece, w) - piece.r


def outline_contains(o: Outline, p, tol: float = 0.0) -> bool:
    """Membership in the convex region bounded by the outline."""
    for piece in o.pieces:
        if piece_violation(piece, p) > tol:
            return False
    return True


def outline_contains_batch(o: Outline, pts: np.ndarray, tol: float = 0.0) -> np.ndarray:
    ok = np.ones(len(pts), dtype=bool)
    for piece in o.pieces:
        if isinstance(piece, Segment):
            dx = piece.b[0] - piece.a[0]
            dy = piece.b[1] - piece.a[1]
            ln = math.hypot(dx, dy)
            if ln < 1e-15:
                continue
            nx, ny = dy / ln, -dx / ln
            v = nx * (pts[:, 0] - piece.a[0]) + ny * (pts[:, 1] - piece.a[1])
        else:
            w = pts - np.asarray(piece.c)
            wa = np.arctan2(w[:, 1], w[:, 0])
            rel = np.mod(wa - piece.a0, TAU)
            inside_range = rel <= piece.span
            u0 = dirvec(piece.a0)
            u1 = dirvec(piece.a0 + piece.span)
            end_sup = np.maximum(w @ np.asarray(u0), w @ np.asarray(u1))
            sup = np.where(inside_range, np.hypot(w[:, 0], w[:, 1]), end_sup)
            v = sup - piece.r
        ok &= v <= tol
    return ok


def closest_point_on_piece(piece, p):
    if isinstance(piece, Segment):
        ax, ay = piece.a
        bx, by = piece.b
        dx, dy = bx - ax, by - ay
        L2 = dx * dx + dy * dy
        if L2 < 1e-30:
            return piece.a
        t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / L2
        t = max(0.0, min(1.0, t))
        return (ax + t * dx, ay + t * dy)
    w = (p[0] - piece.c[0], p[1] - piece.c[1])
    wn = math.hypot(w[0], w[1])
    if wn < 1e-15:
        return piece.p0
    wa = math.atan2(w[1], w[0])
    rel = (wa - piece.a0) % TAU
    if rel <= piece.span:
        return (piece.c[0] + piece.r * w[0] / wn, piece.c[1] + piece.r * w[1] / wn)
    q0, q1 = piece.p0, piece.p1
    return q0 if dist(p, q0) <= dist(p, q1) else q1


def closest_point_on_outline(p, o: Outline):
    """Globally nearest outline point and its distance; ties break toward the
    lowest piece index."""
    best_q = None
    best_d = math.inf
    for piece in o.pieces:
        q = closest_point_on_piece(piece, p)
        d = dist(p, q)
        if d < best_d - 1e-15:
            best_d = d
            best_q = q
    return best_q, best_d


def outline_support(o: Outline, n):
    """Support point of the region in direction n."""
    if o.discs is not None:
        nn = unit(n)
        best = None
        best_v = -math.inf
        for d in o.discs:
            v = d.c[0] * nn[0] + d.c[1] * nn[1] + d.r
            if v > best_v:
                best_v = v
                best = vadd(d.c, vscale(nn, d.r))
        return best
    nn = unit(n)
    best = None
    best_v = -math.inf
    for piece in o.pieces:
        if isinstance(piece, Segment):
            cands = (piece.a, piece.b)
        else:
            wa = math.atan2(nn[1], nn[0])
            rel = (wa - piece.a0) % TAU
            if rel <= piece.span:
                cands = (vadd(piece.c, vscale(nn, piece.r)),)
            else:
                cands = (piece.p0, piece.p1)
        for q in cands:
            v = q[0] * nn[0] + q[1] * nn[1]
            if v > best_v:
                best_v = v
                best = q
    return best


def outline_area(o: Outline) -> float:
    """Exact signed area (positive for CCW chains) via the line integral
    (1/2) * closed integral of (x dy - y dx)."""
    total = 0.0
    for piece in o.pieces:
        if isinstance(piece, Segment):
            total += 0.5 * cross(piece.a, piece.b)
        else:
            total += 0.5 * cross(piece.c, vsub(piece.p1, piece.p0))
            total += 0.5 * piece.r * piece.r * piece.span
    return total


def outline_perimeter(o: Outline) -> float:
    return sum(p.length() for p in o.pieces)


def sample_outline(o: Outline, n: int):
    """n points spaced uniformly by arclength along the chain."""
    lengths = [p.length() for p in o.pieces]
    total = sum(lengths)
    pts = []
    step = total / n
    acc = 0.0
    k = 0
    pos = 0.0  # arclength consumed in piece k
    for i in range(n):
        target = i * step
        while k < len(o.pieces) - 1 and target > acc + lengths[k] - 1e-15:
            acc += lengths[k]
            k += 1
        local = target - acc
        piece = o.pieces[k]
        if isinstance(piece, Segment):
            t = 0.0 if lengths[k] == 0 else local / lengths[k]
            pts.append((piece.a[0] + t * (piece.b[0] - piece.a[0]),
                        piece.a[1] + t * (piece.b[1] - piece.a[1])))
        else:
            ang = piece.a0 + (local / piece.r if piece.r > 0 else 0.0)
            pts.append(piece.point_at(ang))
    return pts


def ray_outline_entry(o: Outline, d):
    """Smallest t >= 0 with t*d on the outline, for a ray from the origin.

    Returns None when the ray misses the region.  Assumes the origin lies
    outside the (convex) region.
    """
    dn2 = d[0] * d[0] + d[1] * d[1]
    if dn2 < 1e-30:
        return None
    best = None
    for piece in o.pieces:
        if isinstance(piece, Segment):
            ex = piece.b[0] - piece.a[0]
            ey = piece.b[1] - piece.a[1]
            den = d[0] * ey - d[1] * ex
            if abs(den) < 1e-15:
                continue
            t = (piece.a[0] * ey - piece.a[1] * ex) / den
            if t < 0.0:
                continue
            if abs(ex) >= abs(ey):
                s = (t * d[0] - piece.a[0]) / ex
            else:
                s = (t * d[1] - piece.a[1]) / ey
            if -1e-12 <= s <= 1.0 + 1e-12:
                if best is None or t < best:
                    best = t
        else:
            cx, cy, r = piece.c[0], piece.c[1], piece.r
            b = -2.0 * (d[0] * cx + d[1] * cy)
            c = cx * cx + cy * cy - r * r
            disc = b * b - 4.0 * dn2 * c
            if disc < 0.0:
                continue
            sq = math.sqrt(disc)
            for t in ((-b - sq) / (2.0 * dn2), (-b + sq) / (2.0 * dn2)):
                if t < 0.0:
                    continue
                px, py = t * d[0] - cx, t * d[1] - cy
                rel = (math.atan2(py, px) - piece.a0) % TAU
                if rel <= piece.span + 1e-9:
                    if best is None or t < best:
                        best = t
    return best


# ---------------------------------------------------------------------------
# rigid transforms

def transform_point(p, pos, cos_t, sin_t):
    return (pos[0] + cos_t * p[0] - sin_t * p[1],
            pos[1] + sin_t * p[0] + cos_t * p[1])


def transform_circle(c: Circle, pos, cos_t, sin_t) -> Circle:
    return Circle(transform_point(c.c, pos, cos_t, sin_t), c.r)


def transform_tuple(t: MedialTuple, pos, theta) -> MedialTuple:
    ct, st = math.cos(theta), math.sin(theta)
    big = transform_circle(t.big, pos, ct, st)
    small = transform_circle(t.small, pos, ct, st)
    return MedialTuple(
        big, small,
        transform_point(t.t1, pos, ct, st),
        transform_point(t.t2, pos, ct, st),
        transform_point(t.t3, pos, ct, st),
        transform_point(t.t4, pos, ct, st),
        norm_angle(t.axis_angle + theta) if not t.degenerate else 0.0,
        t.degenerate,
        t.type_key,
    )


def translate_outline(o: Outline, dx, dy) -> Outline:
    pieces = []
    for p in o.pieces:
        if isinstance(p, Segment):
            pieces.append(Segment((p.a[0] + dx, p.a[1] + dy), (p.b[0] + dx, p.b[1] + dy)))
        else:
            pieces.append(Arc((p.c[0] + dx, p.c[1] + dy), p.r, p.a0, p.span))
    discs = None
    if o.discs is not None:
        discs = [Circle((d.c[0] + dx, d.c[1] + dy), d.r) for d in o.discs]
    return Outline(pieces, discs=discs, provenance=o.provenance)


def rotate_outline(o: Outline, theta) -> Outline:
    ct, st = math.cos(theta), math.sin(theta)
    pieces = []
    for p in o.pieces:
        if isinstance(p, Segment):
            pieces.append(Segment(rot_cs(p.a, ct, st), rot_cs(p.b, ct, st)))
        else:
            pieces.append(Arc(rot_cs(p.c, ct, st), p.r, p.a0 + theta, p.span))
    discs = None
    if o.discs is not None:
        discs = [Circle(rot_cs(d.c, ct, st), d.r) for d in o.discs]
    return Outline(pieces, discs=discs, provenance=o.provenance)


def scale_outline(o: Outline, s) -> Outline:
    pieces = []
    for p in o.pieces:
        if isinstance(p, Segment):
            pieces.append(Segment(vscale(p.a, s), vscale(p.b, s)))
        else:
            pieces.append(Arc(vscale(p.c, s), p.r * s, p.a0, p.span))
    discs = None
    if o.discs is not None:
        discs = [Circle(vscale(d.c, s), d.r * s) for d in o.discs]
    return Outline(pieces, discs=discs, provenance=o.provenance)
