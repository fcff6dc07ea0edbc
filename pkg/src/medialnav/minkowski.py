"""Minkowski sums of tuples, swept rotation envelopes, and the precomputed
angle-bucketed sum tables keyed by relative orientation.
"""

from __future__ import annotations

import math

from .geom import (
    TAU, Arc, Circle, GeometryError, MedialTuple, Outline, Segment, dirvec,
    disc_hull, dist, make_tuple, rotate_outline, translate_outline,
)


class UnknownShapeType(GeometryError):
    pass


def offset_tuple(t: MedialTuple, r: float) -> MedialTuple:
    """Dilate a tuple by a disc of radius r: both radii grow, centers stay,
    tangent lines shift outward along their normals."""
    if r < 0:
        raise GeometryError("offset radius must be non-negative")
    out = make_tuple(Circle(t.big.c, t.big.r + r), Circle(t.small.c, t.small.r + r))
    out.type_key = None
    return out


def tuple_cross_discs(tA: MedialTuple, tB: MedialTuple):
    """Generator discs of B (+) (-A): pairwise center differences with summed
    radii."""
    out = []
    for cb in tB.circles():
        for ca in tA.circles():
            out.append(Circle((cb.c[0] - ca.c[0], cb.c[1] - ca.c[1]), cb.r + ca.r))
    return out


def minkowski_two_tuples(tA: MedialTuple, tB: MedialTuple) -> Outline:
    """Boundary of B (+) (-A): the hull of the four discs obtained by
    expanding B's circles by A's radii and placing them at the center
    differences.  Composed of line segments and circular arcs."""
    o = disc_hull(tuple_cross_discs(tA, tB))
    o.provenance = "exact"
    return o


def swept_tuple(t: MedialTuple, theta_i: float, theta_j: float) -> Outline:
    """Envelope of rotating the tuple about its big-circle center through
    [theta_i, theta_j] (relative rotation angles).

    The outline keeps the trailing/leading tuple boundaries and joins the far
    small-circle caps with the sweep arc of radius |Pb Ps| + r_s about Pb.
    """
    span = theta_j - theta_i
    if span < -1e-12:
        raise GeometryError("theta_j must be >= theta_i")
    if t.degenerate:
        return t.outline()
    pb = t.big.c
    rb, rs = t.big.r, t.small.r
    L = dist(pb, t.small.c)
    if span <= 1e-12:
        ct, st = math.cos(theta_i), math.sin(theta_i)
        sc = (pb[0] + ct * (t.small.c[0] - pb[0]) - st * (t.small.c[1] - pb[1]),
              pb[1] + st * (t.small.c[0] - pb[0]) + ct * (t.small.c[1] - pb[1]))
        return make_tuple(Circle(pb, rb), Circle(sc, rs)).outline()

    cos_a = (rb - rs) / L
    cos_a = max(-1.0, min(1.0, cos_a))
    alpha = math.acos(cos_a)
    phi_i = t.axis_angle + theta_i
    phi_j = t.axis_angle + theta_j
    if TAU - 2 * alpha - span <= 1e-12:
        raise GeometryError("sweep interval too wide for an arc/segment envelope")

    def small_center(phi):
        return (pb[0] + L * math.cos(phi), pb[1] + L * math.sin(phi))

    ci = small_center(phi_i)
    cj = small_center(phi_j)
    pieces = []
    pieces.append(Arc(pb, rb, phi_j + alpha, TAU - 2 * alpha - span))
    t3 = (pb[0] + rb * math.cos(phi_i - alpha), pb[1] + rb * math.sin(phi_i - alpha))
    t4 = (ci[0] + rs * math.cos(phi_i - alpha), ci[1] + rs * math.sin(phi_i - alpha))
    if dist(t3, t4) > 1e-12:
        pieces.append(Segment(t3, t4))
    if rs > 1e-12 and alpha > 1e-12:
        pieces.append(Arc(ci, rs, phi_i - alpha, alpha))
    pieces.append(Arc(pb, L + rs, phi_i, span))
    if rs > 1e-12 and alpha > 1e-12:
        pieces.append(Arc(cj, rs, phi_j, alpha))
    t2 = (cj[0] + rs * math.cos(phi_j + alpha), cj[1] + rs * math.sin(phi_j + alpha))
    t1 = (pb[0] + rb * math.cos(phi_j + alpha), pb[1] + rb * math.sin(phi_j + alpha))
    if dist(t2, t1) > 1e-12:
        pieces.append(Segment(t2, t1))
    return Outline(pieces, discs=None, provenance="swept")


def sweep_cover_discs(t: MedialTuple, theta_i: float, theta_j: float):
    """Two-disc conservative cover of the swept tuple: the fixed big circle
    plus a mid-sweep copy of the small circle inflated by the chord sagitta
    bound 2 L sin(span/4)."""
    if t.degenerate:
        return [Circle(t.big.c, t.big.r)]
    pb = t.big.c
    L = dist(pb, t.small.c)
    span = theta_j - theta_i
    mid = t.axis_angle + 0.5 * (theta_i + theta_j)
    pad = 2.0 * L * math.sin(max(span, 0.0) / 4.0)
    cover = Circle((pb[0] + L * math.cos(mid), pb[1] + L * math.sin(mid)),
                   t.small.r + pad)
    return [Circle(pb, t.big.r), cover]


# ---------------------------------------------------------------------------
# precomputed tables

def tuple_signature(t: MedialTuple):
    L = 0.0 if t.degenerate else dist(t.big.c, t.small.c)
    return (round(t.big.r, 9), round(t.small.r, 9), round(L, 9))


def canonical_tuple(sig) -> MedialTuple:
    rb, rs, L = sig
    tt = make_tuple(Circle((0.0, 0.0), rb), Circle((L, 0.0), rs))
    return tt


class MinkowskiTable:
    """Per ordered tuple-type pair and relative-orientation bucket, a
    conservative Minkowski outline in the first tuple's frame, anchored at
    the big-circle centers."""

    def __init__(self, theta_e: float, types, entries):
        self.theta_e = theta_e
        nb = int(math.floor(TAU / theta_e + 1e-9))
        self.full_buckets = nb
        self.n_buckets = nb + (1 if nb * theta_e < TAU - 1e-9 else 0)
        self.types = types          # list of signatures
        self.entries = entries      # (ia, ib, k) -> Outline (canonical frame)
        self._rot_cache = {}

    def bucket_of(self, rel_angle):
        k = int(rel_angle / self.theta_e)
        return min(k, self.n_buckets - 1)

    def rotated_entry(self, ia, ib, k, base_idx):
        key = (ia, ib, k, base_idx)
        got = self._rot_cache.get(key)
        if got is None:
            got = rotate_outline(self.entries[(ia, ib, k)], base_idx * self.theta_e)
            self._rot_cache[key] = got
        return got


def bucket_bounds(theta_e, k):
    lo = k * theta_e
    hi = min((k + 1) * theta_e, TAU)
    return lo, hi


def register_shape_types(shapes, types=None, index=None):
    """Assign a type key to every tuple of every shape; returns the type
    signature list."""
    types = types if types is not None else []
    index = index if index is not None else {sig: i for i, sig in enumerate(types)}
    for shape in shapes:
        for t in shape.tuples:
            sig = tuple_signature(t)
            if sig not in index:
                index[sig] = len(types)
                types.append(sig)
            t.type_key = index[sig]
    return types


def build_tables(shapes, theta_e: float = math.pi / 36.0) -> MinkowskiTable:
    """Precompute sum outlines for every ordered type pair and every relative
    orientation bucket.  Entries use swept covers of both operands, so any
    in-bucket orientation pair is contained."""
    if not (0.0 < theta_e < TAU):
        raise GeometryError("bucket width must be in (0, 2*pi)")
    types = register_shape_types(shapes)
    nb = int(math.floor(TAU / theta_e + 1e-9))
    nbuckets = nb + (1 if nb * theta_e < TAU - 1e-9 else 0)

    covers_a = []
    covers_b = []
    for sig in types:
        ct = canonical_tuple(sig)
        lo, hi = bucket_bounds(theta_e, 0)
        covers_a.append(sweep_cover_discs(ct, lo, hi))
        per_bucket = []
        for k in range(nbuckets):
            lo, hi = bucket_bounds(theta_e, k)
            per_bucket.append(sweep_cover_discs(ct, lo, hi))
        covers_b.append(per_bucket)

    entries = {}
    for ia in range(len(types)):
        ca = covers_a[ia]
        for ib in range(len(types)):
            for k in range(nbuckets):
                cb = covers_b[ib][k]
                discs = [Circle((b.c[0] - a.c[0], b.c[1] - a.c[1]), b.r + a.r)
                         for b in cb for a in ca]
                o = disc_hull(discs)
                o.provenance = "table"
                entries[(ia, ib, k)] = o
    return MinkowskiTable(theta_e, types, entries)


def lookup(table: MinkowskiTable, tA: MedialTuple, tB: MedialTuple) -> Outline:
    """Table-backed Minkowski sum for two placed tuples: rotate into A's
    bucket frame, pick B's relative-orientation bucket, then translate by the
    actual big-center offset."""
    ia = getattr(tA, "type_key", None)
    ib = getattr(tB, "type_key", None)
    if ia is None or ib is None or ia >= len(table.types) or ib >= len(table.types):
        raise UnknownShapeType("tuple type not present in table")
    te = table.theta_e
    tha = 0.0 if tA.degenerate else tA.axis_angle % TAU
    thb = 0.0 if tB.degenerate else tB.axis_angle % TAU
    base_idx = int(tha / te)
    if base_idx >= table.n_buckets:
        base_idx = 0
        tha -= TAU
    rel = (thb - base_idx * te) % TAU
    k = table.bucket_of(rel)
    ent = table.rotated_entry(ia, ib, k, base_idx)
    dx = tB.big.c[0] - tA.big.c[0]
    dy = tB.big.c[1] - tA.big.c[1]
    out = translate_outline(ent, dx, dy)
    out.provenance = "table"
    return out
